#include "relcap/synth.hpp"

#include <algorithm>
#include <stdexcept>

#include "relcap/rng.hpp"

namespace relcap {

std::string spatial_caption_word(int class_id) {
  switch (class_id) {
    case 1: return "inside";
    case 2: return "cover";
    case 3: return "overlap";
    default:
      if (class_id >= 4 && class_id <= 11) {
        return "sector" + std::to_string(class_id - 3);
      }
      throw std::out_of_range("spatial_caption_word: class " + std::to_string(class_id));
  }
}

std::string category_noun(std::size_t category) {
  static const char* nouns[] = {"dog",   "cat",   "car",  "tree", "man",  "woman", "bird",
                                "table", "ball",  "chair", "boat", "horse", "lamp", "bus",
                                "bike",  "sheep"};
  constexpr std::size_t n = sizeof(nouns) / sizeof(nouns[0]);
  if (category < n) return nouns[category];
  return "obj" + std::to_string(category);
}

std::vector<Scene> generate_synthetic_corpus(const SynthConfig& config) {
  if (config.n_scenes == 0 || config.k == 0 || config.d_v == 0) {
    throw std::invalid_argument("synth: n_scenes, k and d_v must be positive");
  }
  if (config.d_v < config.n_categories) {
    throw std::invalid_argument("synth: d_v must cover the category one-hot block");
  }
  if (config.captions_min < 1 || config.captions_min > config.captions_max) {
    throw std::invalid_argument("synth: caption count range is invalid");
  }
  Rng rng(Rng::derive(config.seed, 41));
  std::vector<Scene> scenes;
  scenes.reserve(config.n_scenes);
  for (std::size_t s = 0; s < config.n_scenes; ++s) {
    Scene scene;
    scene.image_id = "scene_" + std::to_string(s);
    std::vector<std::size_t> categories(config.k);
    for (std::size_t r = 0; r < config.k; ++r) {
      double w = rng.uniform(0.08, 0.35);
      double h = rng.uniform(0.08, 0.35);
      double x1 = rng.uniform(0.0, 1.0 - w);
      double y1 = rng.uniform(0.0, 1.0 - h);
      Region region;
      region.box = {x1, y1, x1 + w, y1 + h};
      categories[r] = rng.uniform_int(config.n_categories);
      region.feature = Tensor::zeros({config.d_v});
      for (std::size_t d = 0; d < config.d_v; ++d) {
        region.feature.data[d] = rng.uniform(-config.noise, config.noise);
      }
      region.feature.data[categories[r]] += 1.0;
      scene.regions.push_back(std::move(region));
    }

    std::size_t n_captions =
        config.captions_min + rng.uniform_int(config.captions_max - config.captions_min + 1);
    for (std::size_t c = 0; c < n_captions; ++c) {
      std::string caption;
      for (int attempt = 0; attempt < 30 && caption.empty(); ++attempt) {
        std::size_t i = rng.uniform_int(config.k);
        std::size_t j = rng.uniform_int(config.k);
        if (config.k > 1 && i == j) continue;
        if (i == j) break;
        if (auto cls = classify_spatial(scene.regions[i].box, scene.regions[j].box)) {
          caption = "a " + category_noun(categories[i]) + " " + spatial_caption_word(*cls) +
                    " a " + category_noun(categories[j]);
        }
      }
      if (caption.empty()) {
        caption = "a " + category_noun(categories[rng.uniform_int(config.k)]);
      }
      scene.captions.push_back(std::move(caption));
    }

    for (std::size_t i = 0; i < config.k; ++i) {
      for (std::size_t j = 0; j < config.k; ++j) {
        if (i == j) continue;
        Tensor uni = Tensor::zeros({config.d_v});
        for (std::size_t d = 0; d < config.d_v; ++d) {
          uni.data[d] = std::max(scene.regions[i].feature.data[d],
                                 scene.regions[j].feature.data[d]) +
                        rng.uniform(-config.noise, config.noise);
        }
        scene.union_features.emplace(PairKey{i, j}, std::move(uni));
      }
    }

    if (config.n_sem > 0) {
      std::vector<GraphEdge> edges;
      for (std::size_t i = 0; i < config.k; ++i) {
        for (std::size_t j = 0; j < config.k; ++j) {
          if (i == j) continue;
          RelativeGeometry g = relative_geometry(scene.regions[i].box, scene.regions[j].box);
          if (g.diagonal_ratio <= 0.5) {
            int label = 1 + static_cast<int>((categories[i] * 3 + categories[j]) % config.n_sem);
            edges.push_back({i, j, label});
          }
        }
      }
      scene.semantic_edges = std::move(edges);
    }

    scenes.push_back(std::move(scene));
  }
  return scenes;
}

}  // namespace relcap
