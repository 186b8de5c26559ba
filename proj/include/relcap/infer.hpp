#pragma once

#include <memory>
#include <string>
#include <vector>

#include "relcap/model.hpp"
#include "relcap/scene.hpp"
#include "relcap/vocab.hpp"

namespace relcap {

enum class FusionMode { semantic, spatial, fused };

const char* fusion_mode_name(FusionMode mode);
FusionMode fusion_mode_from_name(const std::string& name);

// Convex combination alpha * p_sem + (1 - alpha) * p_spa, elementwise.
std::vector<double> fuse(const std::vector<double>& p_sem, const std::vector<double>& p_spa,
                         double alpha);

struct GenConfig {
  FusionMode mode = FusionMode::fused;
  double alpha = 0.7;
  std::size_t beam = 3;
  std::size_t max_len = 20;
  bool gcn_reverse = true;
};

struct StepAttention {
  std::size_t step = 0;
  GraphKind branch = GraphKind::spatial;
  std::vector<double> lambda;
};

struct GenResult {
  std::vector<std::size_t> tokens;  // content tokens, no BOS/EOS
  std::string caption;
  double score = 0.0;  // cumulative log-probability / scored steps
  std::vector<StepAttention> attention;
  // every finished hypothesis the search saw, for diagnostics
  std::vector<std::pair<std::string, double>> completed;
};

// One branch's decoder advanced step by step against a fixed encoding of the
// scene. Holds the tape alive for the whole decode.
class BranchDecoder {
 public:
  BranchDecoder(const ParamStore& params, const Scene& scene, const RelationGraph& graph,
                bool gcn_reverse);

  struct Step {
    std::vector<double> probs;   // softmax over the vocabulary
    std::vector<double> lambda;  // attention over regions
    DecoderState state;
  };

  DecoderState initial_state();
  Step step(const DecoderState& prev, std::size_t word_index);
  std::size_t vocab_size() const { return dims_.dec.vocab; }
  GraphKind kind() const { return dims_.kind; }

 private:
  std::unique_ptr<Tape> tape_;
  BoundParams bound_;
  BranchDims dims_;
  std::vector<Var> encoded_;
  Var v_bar_;
};

// Beam search over the per-step (optionally fused) word distributions. Both
// branch decoders inside one hypothesis always consume the same token
// history. beam == 1 reduces to greedy decoding.
GenResult generate(const Scene& scene, const ParamStore* sem_params,
                   const ParamStore* spa_params, const Vocabulary& vocab,
                   const GenConfig& config, std::size_t n_sem = 4,
                   const ParamStore* relation_classifier = nullptr);

// Straight-line greedy decoder, kept separate from the beam machinery.
GenResult greedy_generate(const Scene& scene, const ParamStore* sem_params,
                          const ParamStore* spa_params, const Vocabulary& vocab,
                          const GenConfig& config, std::size_t n_sem = 4,
                          const ParamStore* relation_classifier = nullptr);

}  // namespace relcap
