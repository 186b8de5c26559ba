#pragma once

#include <vector>

#include "relcap/params.hpp"
#include "relcap/tape.hpp"
#include "relcap/vocab.hpp"

namespace relcap {

struct DecoderDims {
  std::size_t vocab = 0;
  std::size_t d_v = 0;
  std::size_t d_h = 0;
  std::size_t d_a = 0;
  std::size_t d_s1 = 0;
};

// Hidden and cell vectors for both LSTM layers; zeros at sentence start.
struct DecoderState {
  Var h1, c1, h2, c2;
};

struct DecoderStep {
  Var logits;     // (|V|), pre-softmax
  Var attention;  // (K), sums to 1
  DecoderState state;
};

DecoderState initial_decoder_state(Tape& tape, std::size_t d_h);

// One decoding step: the first LSTM layer consumes [h2_prev, embed(word),
// v_bar], attention over the encoded regions is driven by its output, and the
// second layer consumes [attended, h1].
DecoderStep decode_step(const BoundParams& params, const DecoderDims& dims,
                        const DecoderState& prev, std::size_t word_index,
                        const std::vector<Var>& encoded, Var v_bar);

// Teacher-forced negative log-likelihood of the token sequence, wrapped as
// BOS tokens... EOS. The sum runs over all next-token predictions including
// the EOS step.
Var sentence_nll(const BoundParams& params, const DecoderDims& dims,
                 const std::vector<Var>& encoded, const std::vector<std::size_t>& tokens);

// Registers decoder parameters ("dec.*") with Glorot-uniform weights and zero
// biases. Label order is fixed by the store, so init is reproducible.
void add_decoder_params(ParamStore& store, const DecoderDims& dims, Rng& rng);

DecoderDims decoder_dims_from_params(const ParamStore& store);

}  // namespace relcap
