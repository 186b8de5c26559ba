#include "relcap/scene.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace relcap {

using nlohmann::json;

std::string scene_to_json(const Scene& scene) {
  json doc = json::object();
  doc["image_id"] = scene.image_id;
  json regions = json::array();
  for (const Region& r : scene.regions) {
    json reg = json::object();
    reg["box"] = {r.box.x1, r.box.y1, r.box.x2, r.box.y2};
    reg["feature"] = r.feature.data;
    regions.push_back(std::move(reg));
  }
  doc["regions"] = std::move(regions);
  doc["captions"] = scene.captions;
  if (!scene.union_features.empty()) {
    json pairs = json::array();
    for (const auto& [key, feat] : scene.union_features) {
      json rec = json::object();
      rec["i"] = key.first;
      rec["j"] = key.second;
      rec["union_feature"] = feat.data;
      pairs.push_back(std::move(rec));
    }
    doc["union_features"] = std::move(pairs);
  }
  if (scene.semantic_edges) {
    json edges = json::array();
    for (const GraphEdge& e : *scene.semantic_edges) {
      json rec = json::object();
      rec["src"] = e.src;
      rec["dst"] = e.dst;
      rec["label"] = e.label;
      edges.push_back(std::move(rec));
    }
    doc["semantic_edges"] = std::move(edges);
  }
  return doc.dump();
}

std::string scenes_to_jsonl(const std::vector<Scene>& scenes) {
  std::ostringstream out;
  for (const Scene& s : scenes) out << scene_to_json(s) << "\n";
  return out.str();
}

namespace {

Scene scene_from_json(const json& doc) {
  Scene scene;
  scene.image_id = doc.at("image_id").get<std::string>();
  for (const json& reg : doc.at("regions")) {
    std::vector<double> box = reg.at("box").get<std::vector<double>>();
    if (box.size() != 4) throw std::runtime_error("region box must have 4 coordinates");
    Region r;
    r.box = {box[0], box[1], box[2], box[3]};
    if (!r.box.valid()) {
      throw std::runtime_error("invalid box [" + std::to_string(box[0]) + "," +
                               std::to_string(box[1]) + "," + std::to_string(box[2]) + "," +
                               std::to_string(box[3]) + "]");
    }
    r.feature = Tensor::vec(reg.at("feature").get<std::vector<double>>());
    scene.regions.push_back(std::move(r));
  }
  if (scene.regions.empty()) throw std::runtime_error("scene has no regions");
  for (const Region& r : scene.regions) {
    if (r.feature.shape != scene.regions[0].feature.shape) {
      throw std::runtime_error("feature widths differ across regions");
    }
  }
  scene.captions = doc.at("captions").get<std::vector<std::string>>();
  if (doc.contains("union_features")) {
    for (const json& rec : doc.at("union_features")) {
      PairKey key{rec.at("i").get<std::size_t>(), rec.at("j").get<std::size_t>()};
      if (key.first >= scene.k() || key.second >= scene.k()) {
        throw std::runtime_error("union feature pair (" + std::to_string(key.first) + "," +
                                 std::to_string(key.second) + ") out of range");
      }
      Tensor feat = Tensor::vec(rec.at("union_feature").get<std::vector<double>>());
      if (!scene.union_features.emplace(key, std::move(feat)).second) {
        throw std::runtime_error("duplicate union feature for pair (" +
                                 std::to_string(key.first) + "," + std::to_string(key.second) +
                                 ")");
      }
    }
  }
  if (doc.contains("semantic_edges")) {
    std::vector<GraphEdge> edges;
    for (const json& rec : doc.at("semantic_edges")) {
      edges.push_back({rec.at("src").get<std::size_t>(), rec.at("dst").get<std::size_t>(),
                       rec.at("label").get<int>()});
    }
    scene.semantic_edges = std::move(edges);
  }
  return scene;
}

}  // namespace

std::vector<Scene> scenes_from_jsonl(const std::string& text, std::size_t k_max) {
  std::vector<Scene> scenes;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      Scene scene = scene_from_json(json::parse(line));
      if (scene.k() > k_max) {
        throw std::runtime_error("scene has " + std::to_string(scene.k()) +
                                 " regions, k_max=" + std::to_string(k_max));
      }
      scenes.push_back(std::move(scene));
    } catch (const std::exception& e) {
      throw std::runtime_error("scenes: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return scenes;
}

void save_scenes(const std::vector<Scene>& scenes, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("scenes: cannot open \"" + path + "\" for writing");
  out << scenes_to_jsonl(scenes);
}

std::vector<Scene> load_scenes(const std::string& path, std::size_t k_max) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("scenes: cannot open \"" + path + "\"");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenes_from_jsonl(text, k_max);
}

}  // namespace relcap
