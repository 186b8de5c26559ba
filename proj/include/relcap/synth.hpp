#pragma once

#include <cstdint>

#include "relcap/scene.hpp"

namespace relcap {

// Synthetic corpus: randomly placed boxes, features carrying a one-hot
// category block plus noise, per-pair union features, template captions that
// name object categories and their true spatial relation, and semantic edges
// derived from a fixed category rule. Deterministic given the seed.
struct SynthConfig {
  std::size_t n_scenes = 50;
  std::size_t k = 6;        // regions per scene
  std::size_t d_v = 64;
  std::size_t n_categories = 10;
  std::size_t n_sem = 4;    // semantic edge label classes
  std::size_t captions_min = 1;
  std::size_t captions_max = 5;
  double noise = 0.05;
  std::uint64_t seed = 1;
};

std::vector<Scene> generate_synthetic_corpus(const SynthConfig& config);

// Caption word for a spatial class, e.g. 3 -> "overlap", 5 -> "sector2".
std::string spatial_caption_word(int class_id);

// Category noun for the one-hot block index.
std::string category_noun(std::size_t category);

}  // namespace relcap
