#pragma once

#include <array>
#include <string>
#include <vector>

#include "relcap/infer.hpp"
#include "relcap/scene.hpp"

namespace relcap {

struct EvalRecord {
  std::string image_id;
  std::string caption;
  double score = 0.0;
};

struct EvalReport {
  std::array<double, 4> bleu{};  // BLEU@1..4
  std::vector<EvalRecord> records;
  std::string mode;
  double alpha = 0.0;
  std::size_t beam = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

// Captions every scene and scores the outputs against the scenes' reference
// captions with corpus BLEU@1..4.
EvalReport evaluate_scenes(const std::vector<Scene>& scenes, const ParamStore* sem_params,
                           const ParamStore* spa_params, const Vocabulary& vocab,
                           const GenConfig& config, std::size_t n_sem = 4,
                           const ParamStore* relation_classifier = nullptr);

// One fused evaluation per alpha; returns (alpha, BLEU@4) rows.
std::vector<std::pair<double, double>> alpha_sweep(
    const std::vector<Scene>& scenes, const ParamStore& sem_params, const ParamStore& spa_params,
    const Vocabulary& vocab, const std::vector<double>& alphas, const GenConfig& base_config,
    std::size_t n_sem = 4, const ParamStore* relation_classifier = nullptr);

std::string alpha_sweep_csv(const std::vector<std::pair<double, double>>& rows);

}  // namespace relcap
