#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "relcap/geometry.hpp"

namespace relcap {

struct GraphEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  int label = 0;

  auto operator<=>(const GraphEdge&) const = default;
};

// Directed labeled graph over region indices. Label 0 is always the implicit
// self-loop label: every vertex carries exactly one self-loop, which is not
// stored in `edges` and not exported. Explicit edge labels are 1..labels()-1.
class RelationGraph {
 public:
  RelationGraph() = default;
  RelationGraph(std::size_t vertex_count, std::vector<std::string> label_names);

  // Validates endpoints and label range, rejects self-edges and duplicate
  // (src, dst) pairs, and keeps the edge list sorted by (src, dst, label).
  void add_edge(std::size_t src, std::size_t dst, int label);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t label_count() const { return label_names_.size(); }
  static constexpr int kSelfLabel = 0;

  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  bool operator==(const RelationGraph&) const = default;

  std::string to_json() const;

  // Parses {"k", "edges", "labels"}. Errors carry the line number of the
  // offending edge entry.
  static RelationGraph from_json(const std::string& text);

 private:
  std::size_t vertex_count_ = 0;
  std::vector<std::string> label_names_{"self"};
  std::vector<GraphEdge> edges_;
};

// Label names for spatial graphs: "self" plus the eleven taxonomy classes,
// so spatial class c maps directly to graph label c.
std::vector<std::string> spatial_label_names();

// Classifies all ordered box pairs and adds an edge wherever a class holds.
RelationGraph build_spatial_graph(const std::vector<BoundingBox>& boxes);

}  // namespace relcap
