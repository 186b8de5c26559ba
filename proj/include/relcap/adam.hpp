#pragma once

#include <cstdint>

#include "relcap/params.hpp"

namespace relcap {

struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Moment tensors are allocated on first use and always
// match the shapes of their parameters.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  // Applies one update in place. Throws if any gradient is non-finite,
  // naming the offending parameter.
  void step(ParamStore& params, const ParamStore& grads);

  std::int64_t steps() const { return step_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  ParamStore m_;
  ParamStore v_;
  std::int64_t step_ = 0;
};

}  // namespace relcap
