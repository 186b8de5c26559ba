#include <doctest.h>

#include <cmath>
#include <cstring>

#include "relcap/rng.hpp"
#include "relcap/tape.hpp"

using namespace relcap;

TEST_SUITE("tape") {

TEST_CASE("matmul by the identity returns the input") {
  Tape tape;
  Var eye = tape.leaf(Tensor::identity(3));
  Var x = tape.leaf(Tensor::matrix(3, 4, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
  Var y = matmul(eye, x);
  CHECK(y.value().data == x.value().data);
}

TEST_CASE("softmax of zeros is uniform") {
  Tape tape;
  Var y = softmax(tape.leaf(Tensor::vec({0.0, 0.0, 0.0})));
  for (double v : y.value().data) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("cross entropy of uniform 10-way prediction is ln 10") {
  Tape tape;
  Var logits = tape.leaf(Tensor::zeros({10}));
  for (std::size_t target : {0u, 3u, 9u}) {
    Var loss = cross_entropy(logits, target);
    CHECK(loss.value().data[0] == doctest::Approx(std::log(10.0)).epsilon(1e-12));
  }
}

TEST_CASE("shape mismatches name the op and both shapes") {
  Tape tape;
  Var a = tape.leaf(Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  Var b = tape.leaf(Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  CHECK_THROWS_WITH_AS(matmul(a, b), "matmul: shape mismatch [2x3] vs [2x3]",
                       std::invalid_argument);
  Var v = tape.leaf(Tensor::vec({1, 2}));
  CHECK_THROWS_WITH_AS(matvec(a, v), "matvec: shape mismatch [2x3] vs [2]",
                       std::invalid_argument);
  Var w = tape.leaf(Tensor::vec({1, 2, 3}));
  CHECK_THROWS_WITH_AS(add(v, w), "add: shape mismatch [2] vs [3]", std::invalid_argument);
}

TEST_CASE("backward of sum(W x) gives outer(1, x)") {
  Tape tape;
  Var w = tape.leaf(Tensor::matrix(2, 3, {0.5, -1.0, 2.0, 1.5, 0.25, -0.75}));
  Var x = tape.leaf(Tensor::vec({1.0, 2.0, 3.0}));
  Var ones = tape.constant(Tensor::vec({1.0, 1.0}));
  Var loss = dot(ones, matvec(w, x));
  tape.backward(loss);
  // each row of dW equals x
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(w.grad().at(r, c) == doctest::Approx(x.value().data[c]).epsilon(1e-15));
    }
  }
  CHECK(loss.grad().data[0] == 1.0);
}

TEST_CASE("parameters that do not influence the loss get zero gradient") {
  Tape tape;
  Var used = tape.leaf(Tensor::vec({2.0, 3.0}));
  Var unused = tape.leaf(Tensor::vec({5.0, 7.0}));
  Var loss = dot(used, used);
  tape.backward(loss);
  for (double g : unused.grad().data) CHECK(g == 0.0);
}

TEST_CASE("backward rejects a non-scalar loss") {
  Tape tape;
  Var v = tape.leaf(Tensor::vec({1.0, 2.0}));
  CHECK_THROWS_AS(tape.backward(v), std::invalid_argument);
}

TEST_CASE("softmax sums to one and ignores constant shifts") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng.uniform_int(9);
    Tensor logits = Tensor::zeros({n});
    for (double& v : logits.data) v = rng.uniform(-10.0, 10.0);
    Tensor shifted = logits;
    double shift = rng.uniform(-5.0, 5.0);
    for (double& v : shifted.data) v += shift;

    Tape tape;
    Var a = softmax(tape.leaf(logits));
    Var b = softmax(tape.leaf(shifted));
    double sum = 0.0;
    for (double v : a.value().data) sum += v;
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::fabs(a.value().data[i] - b.value().data[i]) <= 1e-12);
    }
  }
}

TEST_CASE("forward passes are bit-deterministic") {
  auto run = [] {
    Tape tape;
    Var w = tape.leaf(Tensor::matrix(2, 2, {0.1, -0.7, 0.3, 0.9}));
    Var x = tape.leaf(Tensor::vec({0.5, -0.25}));
    Var y = softmax(tanh(matvec(w, x)));
    return y.value().data;
  };
  auto a = run();
  auto b = run();
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("list reductions are invariant to input order, bit for bit") {
  Rng rng(11);
  std::vector<Tensor> tensors;
  for (int i = 0; i < 7; ++i) {
    Tensor t = Tensor::zeros({4});
    for (double& v : t.data) v = rng.uniform(-1.0, 1.0);
    tensors.push_back(t);
  }
  auto run = [&](const std::vector<int>& order) {
    Tape tape;
    std::vector<Var> vars;
    for (int idx : order) vars.push_back(tape.leaf(tensors[idx]));
    Var s = sum_list(vars);
    Var m = mean_list(vars);
    std::vector<double> weights;
    for (int idx : order) weights.push_back(0.1 + 0.05 * idx);
    Var w = tape.leaf(Tensor::vec(weights));
    Var ws = weighted_sum(w, vars);
    std::vector<double> out = s.value().data;
    out.insert(out.end(), m.value().data.begin(), m.value().data.end());
    out.insert(out.end(), ws.value().data.begin(), ws.value().data.end());
    return out;
  };
  auto fwd = run({0, 1, 2, 3, 4, 5, 6});
  auto rev = run({6, 5, 4, 3, 2, 1, 0});
  auto mix = run({3, 0, 6, 1, 5, 2, 4});
  CHECK(std::memcmp(fwd.data(), rev.data(), fwd.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(fwd.data(), mix.data(), fwd.size() * sizeof(double)) == 0);
}

TEST_CASE("embedding lookups route gradients to one row or column") {
  Tape tape;
  Var m = tape.leaf(Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6}));
  Var r = row(m, 1);
  CHECK(r.value().data == std::vector<double>{3, 4});
  Var c = col(m, 0);
  CHECK(c.value().data == std::vector<double>{1, 3, 5});
  Var ones = tape.constant(Tensor::vec({1.0, 1.0}));
  tape.backward(dot(r, ones));
  CHECK(m.grad().data == std::vector<double>{0, 0, 1, 1, 0, 0});
}

}  // TEST_SUITE
