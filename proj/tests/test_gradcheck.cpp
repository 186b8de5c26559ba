#include <doctest.h>

#include "relcap/gradcheck.hpp"
#include "relcap/rng.hpp"

using namespace relcap;

TEST_SUITE("gradcheck") {

TEST_CASE("sigmoid affine passes at 1e-4") {
  Rng rng(3);
  ParamStore params;
  params.add("w", glorot_uniform({3, 4}, 4, 3, rng));
  params.add("b", glorot_uniform({3}, 3, 1, rng));
  Tensor x = Tensor::vec({0.3, -0.8, 1.2, 0.05});
  auto f = [&](Tape& tape, const BoundParams& p) {
    Var y = sigmoid(affine(p.at("w"), tape.constant(x), p.at("b")));
    return dot(y, y);
  };
  GradCheckReport report = grad_check(f, params, 1e-4);
  CHECK(report.pass());
  CHECK(report.entries.size() == 2);
}

TEST_CASE("an intentionally wrong gradient fails") {
  ParamStore params;
  params.add("x", Tensor::vec({0.7, -1.3, 0.4}));
  // dot(x, const(x)) treats the second factor as data: analytic gradient is
  // x, the true derivative of x.x is 2x
  auto f = [&](Tape& tape, const BoundParams& p) {
    Var x = p.at("x");
    return dot(x, tape.constant(params.at("x")));
  };
  GradCheckReport report = grad_check(f, params, 1e-4);
  CHECK_FALSE(report.pass());
}

TEST_CASE("random five-op composites match central differences") {
  for (std::uint64_t seed : {101, 202, 303}) {
    Rng rng(seed);
    ParamStore params;
    params.add("w1", glorot_uniform({4, 5}, 5, 4, rng));
    params.add("b1", glorot_uniform({4}, 4, 1, rng));
    params.add("w2", glorot_uniform({3, 4}, 4, 3, rng));
    params.add("b2", glorot_uniform({3}, 3, 1, rng));
    Tensor x = Tensor::zeros({5});
    for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
    auto f = [&](Tape& tape, const BoundParams& p) {
      Var h = tanh(affine(p.at("w1"), tape.constant(x), p.at("b1")));
      Var logits = affine(p.at("w2"), h, p.at("b2"));
      return cross_entropy(logits, 1);
    };
    GradCheckReport report = grad_check(f, params, 1e-4);
    CHECK(report.pass());
  }
}

}  // TEST_SUITE
