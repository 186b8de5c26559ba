#include "relcap/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace relcap {

using nlohmann::json;

RelationGraph::RelationGraph(std::size_t vertex_count, std::vector<std::string> label_names)
    : vertex_count_(vertex_count), label_names_(std::move(label_names)) {
  if (vertex_count_ == 0) throw std::invalid_argument("graph: vertex count must be positive");
  if (label_names_.empty() || label_names_[0] != "self") {
    throw std::invalid_argument("graph: label 0 must be \"self\"");
  }
}

void RelationGraph::add_edge(std::size_t src, std::size_t dst, int label) {
  if (src >= vertex_count_ || dst >= vertex_count_) {
    throw std::invalid_argument("graph: edge (" + std::to_string(src) + "," +
                                std::to_string(dst) + ") out of range for k=" +
                                std::to_string(vertex_count_));
  }
  if (src == dst) throw std::invalid_argument("graph: explicit self-edges are not allowed");
  if (label < 1 || static_cast<std::size_t>(label) >= label_names_.size()) {
    throw std::invalid_argument("graph: label " + std::to_string(label) +
                                " out of range (1.." + std::to_string(label_names_.size() - 1) +
                                ")");
  }
  GraphEdge e{src, dst, label};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                             [](const GraphEdge& a, const GraphEdge& b) {
                               return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
                             });
  if (it != edges_.end() && it->src == src && it->dst == dst) {
    throw std::invalid_argument("graph: duplicate edge (" + std::to_string(src) + "," +
                                std::to_string(dst) + ")");
  }
  edges_.insert(it, e);
}

std::string RelationGraph::to_json() const {
  std::string out = "{\n  \"k\": " + std::to_string(vertex_count_) + ",\n  \"edges\": [";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += "{\"src\": " + std::to_string(edges_[i].src) +
           ", \"dst\": " + std::to_string(edges_[i].dst) +
           ", \"label\": " + std::to_string(edges_[i].label) + "}";
  }
  out += edges_.empty() ? "],\n" : "\n  ],\n";
  out += "  \"labels\": " + json(label_names_).dump() + "\n}";
  return out;
}

namespace {

// Line (1-based) of the n-th edge object in the raw text, for error messages.
std::size_t line_of_nth_edge(const std::string& text, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t seen = 0;; ++seen) {
    pos = text.find("\"src\"", pos);
    if (pos == std::string::npos) return 0;
    if (seen == n) break;
    pos += 5;
  }
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

}  // namespace

RelationGraph RelationGraph::from_json(const std::string& text) {
  json doc = json::parse(text);
  std::size_t k = doc.at("k").get<std::size_t>();
  std::vector<std::string> labels = doc.at("labels").get<std::vector<std::string>>();
  RelationGraph graph(k, std::move(labels));
  const json& edges = doc.at("edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const json& e = edges[i];
    try {
      graph.add_edge(e.at("src").get<std::size_t>(), e.at("dst").get<std::size_t>(),
                     e.at("label").get<int>());
    } catch (const std::invalid_argument& err) {
      throw std::runtime_error("graph: edge " + std::to_string(i) + " (line " +
                               std::to_string(line_of_nth_edge(text, i)) + "): " + err.what());
    }
  }
  return graph;
}

std::vector<std::string> spatial_label_names() {
  std::vector<std::string> names{"self"};
  for (int c = 1; c <= kSpatialClassCount; ++c) names.push_back(spatial_class_name(c));
  return names;
}

RelationGraph build_spatial_graph(const std::vector<BoundingBox>& boxes) {
  if (boxes.empty()) throw std::invalid_argument("spatial graph: need at least one box");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!boxes[i].valid()) {
      throw std::invalid_argument("spatial graph: box " + std::to_string(i) + " is invalid");
    }
  }
  RelationGraph graph(boxes.size(), spatial_label_names());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      if (i == j) continue;
      if (auto cls = classify_spatial(boxes[i], boxes[j])) graph.add_edge(i, j, *cls);
    }
  }
  return graph;
}

}  // namespace relcap
