#include "relcap/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace relcap {

void Adam::step(ParamStore& params, const ParamStore& grads) {
  ++step_;
  double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (auto& [name, theta] : params) {
    const Tensor& g = grads.at(name);
    if (!g.same_shape(theta)) {
      throw std::invalid_argument("adam: gradient shape " + shape_str(g.shape) +
                                  " does not match parameter \"" + name + "\" " +
                                  shape_str(theta.shape));
    }
    if (!g.all_finite()) {
      throw std::runtime_error("adam: non-finite gradient for parameter \"" + name + "\"");
    }
    if (!m_.contains(name)) {
      m_.add(name, Tensor::zeros(theta.shape));
      v_.add(name, Tensor::zeros(theta.shape));
    }
    Tensor& m = m_.at(name);
    Tensor& v = v_.at(name);
    for (std::size_t i = 0; i < theta.data.size(); ++i) {
      m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * g.data[i];
      v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * g.data[i] * g.data[i];
      double mhat = m.data[i] / c1;
      double vhat = v.data[i] / c2;
      theta.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace relcap
