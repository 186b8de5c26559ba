#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relcap/params.hpp"

namespace relcap {

// Builds the (scalar) loss for the current parameter values. Called many
// times with perturbed parameters; must be deterministic.
using LossBuilder = std::function<Var(Tape&, const BoundParams&)>;

struct GradCheckReport {
  struct Entry {
    std::string name;
    double max_discrepancy;  // max over elements of |a-n| / max(1, |a|, |n|)
  };
  std::vector<Entry> entries;
  double worst = 0.0;
  double tol = 0.0;

  bool pass() const { return worst <= tol; }
};

// Compares analytic gradients against central finite differences with
// perturbation `step`, parameter by parameter.
GradCheckReport grad_check(const LossBuilder& f, ParamStore& params, double tol,
                           double step = 1e-5);

}  // namespace relcap
