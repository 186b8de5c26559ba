#include <doctest.h>

#include <cmath>

#include "relcap/adam.hpp"

using namespace relcap;

TEST_SUITE("adam") {

TEST_CASE("zero gradient leaves parameters unchanged while moments decay") {
  ParamStore params;
  params.add("w", Tensor::vec({1.0, -2.0, 3.0}));
  Adam adam;

  ParamStore g1;
  g1.add("w", Tensor::vec({1.0, 1.0, 1.0}));
  adam.step(params, g1);
  Tensor after_first = params.at("w");

  ParamStore g0;
  g0.add("w", Tensor::zeros({3}));
  Tensor before = params.at("w");
  adam.step(params, g0);
  // m decays toward zero but theta still moves while m != 0; run many zero
  // steps and the increments shrink geometrically
  double first_move = std::fabs(params.at("w").data[0] - before.data[0]);
  for (int i = 0; i < 200; ++i) adam.step(params, g0);
  Tensor frozen = params.at("w");
  adam.step(params, g0);
  double late_move = std::fabs(params.at("w").data[0] - frozen.data[0]);
  CHECK(late_move < first_move * 1e-6);
  (void)after_first;
}

TEST_CASE("fresh zero gradient never moves a parameter") {
  ParamStore params;
  params.add("w", Tensor::vec({0.5}));
  Adam adam;
  ParamStore g;
  g.add("w", Tensor::zeros({1}));
  adam.step(params, g);
  CHECK(params.at("w").data[0] == 0.5);
}

TEST_CASE("unit gradient at step one moves by lr over (1 + eps)") {
  AdamConfig cfg;
  cfg.lr = 5e-4;
  ParamStore params;
  params.add("w", Tensor::vec({1.0}));
  Adam adam(cfg);
  ParamStore g;
  g.add("w", Tensor::vec({1.0}));
  adam.step(params, g);
  // hand recurrence: m = 0.1, v = 0.001, mhat = vhat = 1
  double expected = 1.0 - cfg.lr * 1.0 / (std::sqrt(1.0) + cfg.eps);
  CHECK(params.at("w").data[0] == doctest::Approx(expected).epsilon(1e-15));
  CHECK(std::fabs(1.0 - params.at("w").data[0]) ==
        doctest::Approx(cfg.lr).epsilon(1e-7));  // magnitude ~ lr
}

TEST_CASE("loss on a convex quadratic decreases monotonically after warmup") {
  AdamConfig cfg;
  cfg.lr = 0.01;
  ParamStore params;
  params.add("w", Tensor::vec({0.0, 4.0}));
  Adam adam(cfg);
  const std::vector<double> target{3.0, -1.0};
  auto loss_of = [&](const Tensor& w) {
    double l = 0.0;
    for (std::size_t i = 0; i < w.data.size(); ++i) {
      l += (w.data[i] - target[i]) * (w.data[i] - target[i]);
    }
    return l;
  };
  std::vector<double> losses;
  for (int step = 0; step < 400; ++step) {
    const Tensor& w = params.at("w");
    losses.push_back(loss_of(w));
    ParamStore g;
    Tensor grad = Tensor::zeros({2});
    for (std::size_t i = 0; i < 2; ++i) grad.data[i] = 2.0 * (w.data[i] - target[i]);
    g.add("w", grad);
    adam.step(params, g);
  }
  const std::size_t warmup = 25;
  for (std::size_t i = warmup; i + 1 < losses.size(); ++i) {
    CHECK(losses[i + 1] <= losses[i] + 1e-12);
  }
  CHECK(losses.back() < losses.front() * 1e-3);
}

TEST_CASE("a NaN gradient is rejected with the parameter name") {
  ParamStore params;
  params.add("dec.out.w", Tensor::vec({1.0}));
  Adam adam;
  ParamStore g;
  g.add("dec.out.w", Tensor::vec({std::nan("")}));
  CHECK_THROWS_WITH_AS(adam.step(params, g),
                       "adam: non-finite gradient for parameter \"dec.out.w\"",
                       std::runtime_error);
}

}  // TEST_SUITE
