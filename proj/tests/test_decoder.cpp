#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "relcap/decoder.hpp"
#include "relcap/gradcheck.hpp"

using namespace relcap;

namespace {

DecoderDims small_dims() { return {10, 4, 5, 3, 3}; }

ParamStore make_params(const DecoderDims& dims, std::uint64_t seed) {
  Rng rng(seed);
  ParamStore params;
  add_decoder_params(params, dims, rng);
  return params;
}

std::vector<Var> region_vars(Tape& tape, const std::vector<Tensor>& feats) {
  std::vector<Var> out;
  for (const Tensor& f : feats) out.push_back(tape.constant(f));
  return out;
}

std::vector<Tensor> random_regions(std::size_t k, std::size_t d, Rng& rng) {
  std::vector<Tensor> out;
  for (std::size_t i = 0; i < k; ++i) {
    Tensor t = Tensor::zeros({d});
    for (double& v : t.data) v = rng.uniform(-1.0, 1.0);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_SUITE("decoder") {

TEST_CASE("identical regions draw uniform attention") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 3);
  Tape tape;
  BoundParams bound = bind(tape, params);
  Tensor f = Tensor::vec({0.4, -0.2, 0.9, 0.1});
  std::vector<Var> encoded = region_vars(tape, {f, f, f, f});
  Var v_bar = mean_list(encoded);
  DecoderStep step = decode_step(bound, dims, initial_decoder_state(tape, dims.d_h),
                                 Vocabulary::kBos, encoded, v_bar);
  for (double l : step.attention.value().data) {
    CHECK(l == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("zero attention transforms give uniform attention over any regions") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 5);
  for (double& v : params.at("dec.att.w_f").data) v = 0.0;
  for (double& v : params.at("dec.att.w_h").data) v = 0.0;
  Tape tape;
  BoundParams bound = bind(tape, params);
  Rng rng(7);
  std::vector<Var> encoded = region_vars(tape, random_regions(3, dims.d_v, rng));
  DecoderStep step = decode_step(bound, dims, initial_decoder_state(tape, dims.d_h),
                                 Vocabulary::kBos, encoded, mean_list(encoded));
  for (double l : step.attention.value().data) {
    CHECK(l == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("zero output projection gives a uniform word distribution") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 9);
  for (double& v : params.at("dec.out.w").data) v = 0.0;
  for (double& v : params.at("dec.out.b").data) v = 0.0;
  Tape tape;
  BoundParams bound = bind(tape, params);
  Rng rng(11);
  std::vector<Var> encoded = region_vars(tape, random_regions(3, dims.d_v, rng));
  DecoderStep step = decode_step(bound, dims, initial_decoder_state(tape, dims.d_h),
                                 Vocabulary::kBos, encoded, mean_list(encoded));
  Var probs = softmax(step.logits);
  for (double p : probs.value().data) CHECK(p == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("attention normalizes and the attended feature stays in the hull") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 13);
  Tape tape;
  BoundParams bound = bind(tape, params);
  Rng rng(17);
  std::vector<Tensor> feats = random_regions(5, dims.d_v, rng);
  std::vector<Var> encoded = region_vars(tape, feats);
  Var v_bar = mean_list(encoded);
  DecoderState state = initial_decoder_state(tape, dims.d_h);
  for (std::size_t word : {Vocabulary::kBos, std::size_t(4), std::size_t(7)}) {
    DecoderStep step = decode_step(bound, dims, state, word, encoded, v_bar);
    const auto& lambda = step.attention.value().data;
    double sum = 0.0;
    for (double l : lambda) {
      CHECK(l >= 0.0);
      CHECK(l <= 1.0);
      sum += l;
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
    Var attended = weighted_sum(step.attention, encoded);
    for (std::size_t c = 0; c < dims.d_v; ++c) {
      double lo = 1e300, hi = -1e300;
      for (const Tensor& f : feats) {
        lo = std::min(lo, f.data[c]);
        hi = std::max(hi, f.data[c]);
      }
      CHECK(attended.value().data[c] >= lo - 1e-12);
      CHECK(attended.value().data[c] <= hi + 1e-12);
    }
    state = step.state;
  }
}

TEST_CASE("permuting regions leaves the word distribution bit-identical") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 19);
  Rng rng(23);
  std::vector<Tensor> feats = random_regions(5, dims.d_v, rng);
  auto run = [&](const std::vector<std::size_t>& order) {
    Tape tape;
    BoundParams bound = bind(tape, params);
    std::vector<Tensor> permuted;
    for (std::size_t idx : order) permuted.push_back(feats[idx]);
    std::vector<Var> encoded = region_vars(tape, permuted);
    DecoderStep step = decode_step(bound, dims, initial_decoder_state(tape, dims.d_h),
                                   Vocabulary::kBos, encoded, mean_list(encoded));
    return softmax(step.logits).value().data;
  };
  auto base = run({0, 1, 2, 3, 4});
  auto perm = run({4, 2, 0, 3, 1});
  CHECK(base == perm);
}

TEST_CASE("uniform prediction scores ln |V| per step") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 29);
  for (double& v : params.at("dec.out.w").data) v = 0.0;
  for (double& v : params.at("dec.out.b").data) v = 0.0;
  Tape tape;
  BoundParams bound = bind(tape, params);
  Rng rng(31);
  std::vector<Var> encoded = region_vars(tape, random_regions(3, dims.d_v, rng));
  // three content tokens plus the EOS step = four predictions
  Var loss = sentence_nll(bound, dims, encoded, {4, 5, 6});
  CHECK(loss.value().data[0] == doctest::Approx(4.0 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("sentence loss is non-negative") {
  DecoderDims dims = small_dims();
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    ParamStore params = make_params(dims, 100 + trial);
    Tape tape;
    BoundParams bound = bind(tape, params);
    std::vector<Var> encoded = region_vars(tape, random_regions(4, dims.d_v, rng));
    Var loss = sentence_nll(bound, dims, encoded, {3, 9, 5, 4});
    CHECK(loss.value().data[0] >= 0.0);
  }
}

TEST_CASE("tokens outside the vocabulary are rejected") {
  DecoderDims dims = small_dims();
  ParamStore params = make_params(dims, 41);
  Tape tape;
  BoundParams bound = bind(tape, params);
  Rng rng(43);
  std::vector<Var> encoded = region_vars(tape, random_regions(2, dims.d_v, rng));
  CHECK_THROWS_AS(sentence_nll(bound, dims, encoded, {3, 10}), std::invalid_argument);
  // the unk token itself is fine
  CHECK_NOTHROW(sentence_nll(bound, dims, encoded, {3, Vocabulary::kUnk}));
}

TEST_CASE("sentence gradients through time match finite differences") {
  DecoderDims dims{8, 3, 4, 3, 3};
  ParamStore params = make_params(dims, 47);
  Rng rng(53);
  std::vector<Tensor> feats = random_regions(3, dims.d_v, rng);
  std::vector<std::size_t> tokens{3, 6, 4};
  auto f = [&](Tape& tape, const BoundParams& p) {
    std::vector<Var> encoded = region_vars(tape, feats);
    return sentence_nll(p, dims, encoded, tokens);
  };
  GradCheckReport report = grad_check(f, params, 1e-4);
  CHECK(report.pass());
  CHECK(report.entries.size() == params.size());
}

}  // TEST_SUITE
