#include "relcap/params.hpp"

#include <cmath>
#include <stdexcept>

namespace relcap {

Tensor& ParamStore::add(const std::string& name, Tensor t) {
  auto [it, fresh] = items_.emplace(name, std::move(t));
  if (!fresh) throw std::invalid_argument("params: duplicate parameter \"" + name + "\"");
  return it->second;
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = items_.find(name);
  if (it == items_.end()) throw std::out_of_range("params: unknown parameter \"" + name + "\"");
  return it->second;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = items_.find(name);
  if (it == items_.end()) throw std::out_of_range("params: unknown parameter \"" + name + "\"");
  return it->second;
}

Var BoundParams::at(const std::string& name) const {
  auto it = vars.find(name);
  if (it == vars.end()) throw std::out_of_range("params: unknown parameter \"" + name + "\"");
  return it->second;
}

ParamStore BoundParams::grads() const {
  ParamStore g;
  for (const auto& [name, var] : vars) g.add(name, var.grad());
  return g;
}

BoundParams bind(Tape& tape, const ParamStore& params) {
  BoundParams bound;
  for (const auto& [name, tensor] : params) bound.vars.emplace(name, tape.leaf(tensor));
  return bound;
}

Tensor glorot_uniform(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
                      Rng& rng) {
  double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.data) v = rng.uniform(-a, a);
  return t;
}

}  // namespace relcap
