#include "relcap/gcn.hpp"

#include <stdexcept>

namespace relcap {

namespace {

// A contribution to one vertex: neighbor feature index, edge label, and the
// direction the edge is traversed in (0 self, 1 along, 2 against).
struct Contribution {
  std::size_t neighbor;
  int label;
  int direction;
};

void check_inputs(const std::vector<Var>& features, const RelationGraph& graph) {
  if (features.size() != graph.vertex_count()) {
    throw std::invalid_argument("gcn: " + std::to_string(features.size()) +
                                " feature rows for " + std::to_string(graph.vertex_count()) +
                                " vertices");
  }
}

void check_label_table(const RelationGraph& graph, std::size_t table_rows) {
  if (table_rows == 0) throw std::invalid_argument("gcn: empty label table");
  for (const GraphEdge& e : graph.edges()) {
    if (static_cast<std::size_t>(e.label) >= table_rows) {
      throw std::invalid_argument("gcn: unknown label \"" +
                                  graph.label_names()[static_cast<std::size_t>(e.label)] +
                                  "\" (" + std::to_string(e.label) +
                                  "); parameter table covers " + std::to_string(table_rows) +
                                  " labels");
    }
  }
}

// Contributions per vertex in a fixed order: self first, then incoming edges,
// then reversed outgoing edges. The aggregation itself is order-insensitive;
// this only pins tape layout.
std::vector<std::vector<Contribution>> gather(const RelationGraph& graph, bool include_reverse) {
  std::vector<std::vector<Contribution>> per_vertex(graph.vertex_count());
  for (std::size_t u = 0; u < graph.vertex_count(); ++u) {
    per_vertex[u].push_back({u, RelationGraph::kSelfLabel, 0});
  }
  for (const GraphEdge& e : graph.edges()) {
    per_vertex[e.dst].push_back({e.src, e.label, 1});
    if (include_reverse) per_vertex[e.src].push_back({e.dst, e.label, 2});
  }
  return per_vertex;
}

}  // namespace

std::vector<Var> gcn_vanilla(const std::vector<Var>& features, const RelationGraph& graph,
                             Var w, Var b) {
  check_inputs(features, graph);
  auto per_vertex = gather(graph, true);
  std::vector<Var> out;
  out.reserve(features.size());
  for (std::size_t u = 0; u < features.size(); ++u) {
    std::vector<Var> terms;
    for (const Contribution& c : per_vertex[u]) {
      terms.push_back(add(matvec(w, features[c.neighbor]), b));
    }
    out.push_back(relu(sum_list(terms)));
  }
  return out;
}

namespace {

std::vector<Var> gcn_run(const std::vector<Var>& features, const RelationGraph& graph,
                         const GcnLayerVars& p, bool include_reverse, bool gated) {
  check_inputs(features, graph);
  check_label_table(graph, p.label_bias.value().rows());
  check_label_table(graph, p.gate_bias.value().shape[0]);
  auto per_vertex = gather(graph, include_reverse);
  const Var w_by_dir[3] = {p.w_self, p.w_fwd, p.w_rev};
  const Var gate_by_dir[3] = {p.gate_w_self, p.gate_w_fwd, p.gate_w_rev};
  std::vector<Var> out;
  out.reserve(features.size());
  for (std::size_t u = 0; u < features.size(); ++u) {
    std::vector<Var> terms;
    for (const Contribution& c : per_vertex[u]) {
      Var v = features[c.neighbor];
      Var term = add(matvec(w_by_dir[c.direction], v),
                     row(p.label_bias, static_cast<std::size_t>(c.label)));
      if (gated) {
        Var gate = sigmoid(add(dot(gate_by_dir[c.direction], v),
                               at(p.gate_bias, static_cast<std::size_t>(c.label))));
        term = scale(term, gate);
      }
      terms.push_back(term);
    }
    out.push_back(relu(sum_list(terms)));
  }
  return out;
}

}  // namespace

std::vector<Var> gcn_directional(const std::vector<Var>& features, const RelationGraph& graph,
                                 const GcnLayerVars& p, bool include_reverse) {
  return gcn_run(features, graph, p, include_reverse, false);
}

std::vector<Var> gcn_gated(const std::vector<Var>& features, const RelationGraph& graph,
                           const GcnLayerVars& p, bool include_reverse) {
  return gcn_run(features, graph, p, include_reverse, true);
}

}  // namespace relcap
