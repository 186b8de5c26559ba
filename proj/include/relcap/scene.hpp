#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relcap/geometry.hpp"
#include "relcap/graph.hpp"
#include "relcap/semantic.hpp"
#include "relcap/tensor.hpp"

namespace relcap {

struct Region {
  BoundingBox box;
  Tensor feature;
};

// One image, abstracted: K regions with features, reference captions, and
// optionally per-pair union features and precomputed semantic edges.
struct Scene {
  std::string image_id;
  std::vector<Region> regions;
  std::vector<std::string> captions;
  UnionFeatures union_features;
  std::optional<std::vector<GraphEdge>> semantic_edges;

  std::size_t k() const { return regions.size(); }
  std::size_t d_v() const { return regions.empty() ? 0 : regions[0].feature.shape[0]; }
};

constexpr std::size_t kDefaultKMax = 36;

std::string scene_to_json(const Scene& scene);
std::string scenes_to_jsonl(const std::vector<Scene>& scenes);

// Validates box invariants, uniform feature widths and 1 <= K <= k_max.
// Errors carry the 1-based JSONL line number.
std::vector<Scene> scenes_from_jsonl(const std::string& text, std::size_t k_max = kDefaultKMax);

void save_scenes(const std::vector<Scene>& scenes, const std::string& path);
std::vector<Scene> load_scenes(const std::string& path, std::size_t k_max = kDefaultKMax);

}  // namespace relcap
