#include "relcap/decoder.hpp"

#include <stdexcept>

namespace relcap {

namespace {

struct LstmVars {
  Var wi, wf, wg, wo, bi, bf, bg, bo;
};

LstmVars lstm_vars(const BoundParams& p, const std::string& prefix) {
  return {p.at(prefix + ".w_i"), p.at(prefix + ".w_f"), p.at(prefix + ".w_g"),
          p.at(prefix + ".w_o"), p.at(prefix + ".b_i"), p.at(prefix + ".b_f"),
          p.at(prefix + ".b_g"), p.at(prefix + ".b_o")};
}

// Standard LSTM cell: input/forget/output gates plus tanh candidate, all
// computed from [x, h_prev].
std::pair<Var, Var> lstm_step(const LstmVars& v, Var x, Var h_prev, Var c_prev) {
  Var z = concat({x, h_prev});
  Var i = sigmoid(affine(v.wi, z, v.bi));
  Var f = sigmoid(affine(v.wf, z, v.bf));
  Var g = tanh(affine(v.wg, z, v.bg));
  Var o = sigmoid(affine(v.wo, z, v.bo));
  Var c = add(mul(f, c_prev), mul(i, g));
  Var h = mul(o, tanh(c));
  return {h, c};
}

void add_lstm_params(ParamStore& store, const std::string& prefix, std::size_t input,
                     std::size_t hidden, Rng& rng) {
  std::size_t z = input + hidden;
  for (const char* gate : {"i", "f", "g", "o"}) {
    store.add(prefix + ".w_" + gate, glorot_uniform({hidden, z}, z, hidden, rng));
    store.add(prefix + ".b_" + gate, Tensor::zeros({hidden}));
  }
}

}  // namespace

DecoderState initial_decoder_state(Tape& tape, std::size_t d_h) {
  DecoderState s;
  s.h1 = tape.constant(Tensor::zeros({d_h}));
  s.c1 = tape.constant(Tensor::zeros({d_h}));
  s.h2 = tape.constant(Tensor::zeros({d_h}));
  s.c2 = tape.constant(Tensor::zeros({d_h}));
  return s;
}

DecoderStep decode_step(const BoundParams& params, const DecoderDims& dims,
                        const DecoderState& prev, std::size_t word_index,
                        const std::vector<Var>& encoded, Var v_bar) {
  if (word_index >= dims.vocab) {
    throw std::invalid_argument("decoder: word index " + std::to_string(word_index) +
                                " out of range (|V|=" + std::to_string(dims.vocab) + ")");
  }
  if (encoded.empty()) throw std::invalid_argument("decoder: no encoded regions");

  Var emb = col(params.at("dec.embed"), word_index);
  Var x1 = concat({prev.h2, emb, v_bar});
  auto [h1, c1] = lstm_step(lstm_vars(params, "dec.lstm1"), x1, prev.h1, prev.c1);

  Var w_a = params.at("dec.att.w_a");
  Var w_f = params.at("dec.att.w_f");
  Var w_h = params.at("dec.att.w_h");
  Var wh_h1 = matvec(w_h, h1);
  std::vector<Var> scores;
  scores.reserve(encoded.size());
  for (Var region : encoded) {
    scores.push_back(dot(w_a, tanh(add(matvec(w_f, region), wh_h1))));
  }
  Var lambda = softmax(stack(scores));
  Var attended = weighted_sum(lambda, encoded);

  Var x2 = concat({attended, h1});
  auto [h2, c2] = lstm_step(lstm_vars(params, "dec.lstm2"), x2, prev.h2, prev.c2);

  DecoderStep step;
  step.logits = affine(params.at("dec.out.w"), h2, params.at("dec.out.b"));
  step.attention = lambda;
  step.state = {h1, c1, h2, c2};
  return step;
}

Var sentence_nll(const BoundParams& params, const DecoderDims& dims,
                 const std::vector<Var>& encoded, const std::vector<std::size_t>& tokens) {
  for (std::size_t t : tokens) {
    if (t >= dims.vocab) {
      throw std::invalid_argument("decoder: token " + std::to_string(t) +
                                  " out of vocabulary (|V|=" + std::to_string(dims.vocab) + ")");
    }
  }
  Tape& tape = *encoded.front().tape;
  std::vector<std::size_t> seq;
  seq.push_back(Vocabulary::kBos);
  seq.insert(seq.end(), tokens.begin(), tokens.end());
  seq.push_back(Vocabulary::kEos);

  Var v_bar = mean_list(encoded);
  DecoderState state = initial_decoder_state(tape, dims.d_h);
  std::vector<Var> losses;
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    DecoderStep step = decode_step(params, dims, state, seq[t], encoded, v_bar);
    losses.push_back(cross_entropy(step.logits, seq[t + 1]));
    state = step.state;
  }
  return sum_list(losses);
}

void add_decoder_params(ParamStore& store, const DecoderDims& dims, Rng& rng) {
  store.add("dec.embed", glorot_uniform({dims.d_s1, dims.vocab}, dims.vocab, dims.d_s1, rng));
  add_lstm_params(store, "dec.lstm1", dims.d_h + dims.d_s1 + dims.d_v, dims.d_h, rng);
  add_lstm_params(store, "dec.lstm2", dims.d_v + dims.d_h, dims.d_h, rng);
  store.add("dec.att.w_a", glorot_uniform({dims.d_a}, dims.d_a, 1, rng));
  store.add("dec.att.w_f", glorot_uniform({dims.d_a, dims.d_v}, dims.d_v, dims.d_a, rng));
  store.add("dec.att.w_h", glorot_uniform({dims.d_a, dims.d_h}, dims.d_h, dims.d_a, rng));
  store.add("dec.out.w", glorot_uniform({dims.vocab, dims.d_h}, dims.d_h, dims.vocab, rng));
  store.add("dec.out.b", Tensor::zeros({dims.vocab}));
}

DecoderDims decoder_dims_from_params(const ParamStore& store) {
  DecoderDims d;
  const Tensor& embed = store.at("dec.embed");
  const Tensor& out_w = store.at("dec.out.w");
  const Tensor& att_f = store.at("dec.att.w_f");
  d.d_s1 = embed.rows();
  d.vocab = embed.cols();
  d.d_h = out_w.cols();
  d.d_a = att_f.rows();
  d.d_v = att_f.cols();
  if (out_w.rows() != d.vocab) {
    throw std::runtime_error("decoder: embed/output vocabulary sizes disagree (" +
                             std::to_string(d.vocab) + " vs " + std::to_string(out_w.rows()) +
                             ")");
  }
  return d;
}

}  // namespace relcap
