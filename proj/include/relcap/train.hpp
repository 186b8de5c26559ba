#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relcap/model.hpp"
#include "relcap/scene.hpp"
#include "relcap/vocab.hpp"

namespace relcap {

struct TrainConfig {
  double lr = 5e-4;
  std::size_t batch = 8;
  std::size_t iterations = 2000;
  std::size_t k_max = 8;
  std::size_t d_v = 64;
  std::size_t d_h = 64;
  std::size_t d_a = 32;
  std::size_t d_s1 = 32;
  std::size_t vocab_min_count = 1;
  std::size_t gcn_layers = 1;
  bool gcn_reverse = true;
  double grad_clip = 0.0;  // global-norm clip, 0 = off
  std::size_t n_sem = 4;   // semantic label classes expected in scene data
  std::uint64_t seed = 1;

  // Desk-scale defaults, sized for verification on one machine.
  static TrainConfig desk() { return {}; }
  // Full-scale preset: K=36, 2048-d regions, 1000-d hidden/embedding,
  // 512-d attention, 20 semantic classes, vocab cutoff 5, batch 1024,
  // 30k iterations.
  static TrainConfig paper();

  std::string to_json() const;
  // Overlays fields present in the JSON object; {"preset": "paper"} or
  // {"preset": "desk"} selects the base before overlaying.
  static TrainConfig from_json(const std::string& text);
  static TrainConfig load(const std::string& path);
};

struct TrainResult {
  ParamStore params;
  Vocabulary vocab;
  std::vector<std::pair<std::size_t, double>> loss_curve;  // (iteration, batch loss)
  double final_corpus_nll = 0.0;
};

// Builds the relation graph a branch trains/decodes on. Semantic graphs come
// from the scene's precomputed edges when present, otherwise from the
// relation classifier over the scene's union features.
RelationGraph scene_graph(const Scene& scene, GraphKind kind, std::size_t n_sem,
                          const ParamStore* relation_classifier = nullptr);

// Cross-entropy training of one branch: Adam over the mean teacher-forced
// sentence loss of a scene batch, one uniformly sampled caption per scene
// visit. Deterministic given (seed, config, data).
TrainResult train_branch(const std::vector<Scene>& scenes, GraphKind kind,
                         const TrainConfig& config,
                         const ParamStore* relation_classifier = nullptr);

// Mean sentence loss over every caption of every scene, for a fixed
// parameter set.
double corpus_nll(const ParamStore& params, const Vocabulary& vocab,
                  const std::vector<Scene>& scenes, const TrainConfig& config,
                  const ParamStore* relation_classifier = nullptr);

std::string loss_curve_csv(const std::vector<std::pair<std::size_t, double>>& curve);

}  // namespace relcap
