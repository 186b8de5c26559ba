#include "relcap/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace relcap {

namespace {

double eval_loss(const LossBuilder& f, const ParamStore& params) {
  Tape tape;
  BoundParams bound = bind(tape, params);
  Var loss = f(tape, bound);
  return loss.value().data[0];
}

}  // namespace

GradCheckReport grad_check(const LossBuilder& f, ParamStore& params, double tol, double step) {
  GradCheckReport report;
  report.tol = tol;

  ParamStore analytic;
  {
    Tape tape;
    BoundParams bound = bind(tape, params);
    Var loss = f(tape, bound);
    tape.backward(loss);
    analytic = bound.grads();
  }

  for (auto& [name, theta] : params) {
    const Tensor& a = analytic.at(name);
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.data.size(); ++i) {
      double orig = theta.data[i];
      theta.data[i] = orig + step;
      double up = eval_loss(f, params);
      theta.data[i] = orig - step;
      double down = eval_loss(f, params);
      theta.data[i] = orig;
      double numeric = (up - down) / (2.0 * step);
      double denom = std::max({1.0, std::fabs(a.data[i]), std::fabs(numeric)});
      worst = std::max(worst, std::fabs(a.data[i] - numeric) / denom);
    }
    report.entries.push_back({name, worst});
    report.worst = std::max(report.worst, worst);
  }
  return report;
}

}  // namespace relcap
