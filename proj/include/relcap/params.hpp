#pragma once

#include <map>
#include <string>

#include "relcap/rng.hpp"
#include "relcap/tape.hpp"
#include "relcap/tensor.hpp"

namespace relcap {

// Named parameter tensors, kept sorted by name so that iteration (and hence
// initialization, updates, serialization) is deterministic.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor t);
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return items_.count(name) > 0; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  auto begin() { return items_.begin(); }
  auto end() { return items_.end(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::map<std::string, Tensor> items_;
};

// Leaves for every parameter of a store, recorded on one tape. After
// backward(), grad(name) reads the parameter's gradient.
struct BoundParams {
  std::map<std::string, Var> vars;

  Var at(const std::string& name) const;
  ParamStore grads() const;
};

BoundParams bind(Tape& tape, const ParamStore& params);

// Uniform in [-a, a] with a = sqrt(6 / (fan_in + fan_out)).
Tensor glorot_uniform(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
                      Rng& rng);

}  // namespace relcap
