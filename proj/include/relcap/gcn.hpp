#pragma once

#include <vector>

#include "relcap/graph.hpp"
#include "relcap/tape.hpp"

namespace relcap {

// One layer of direction- and label-sensitive graph convolution parameters.
// w_fwd transforms the source feature of an edge for its destination vertex,
// w_rev transforms the destination feature for the source vertex, w_self the
// vertex's own feature. label_bias is (labels x d_v) with row 0 = self-loop;
// gate_bias is (labels), gate_w_* are (d_v).
struct GcnLayerVars {
  Var w_fwd, w_rev, w_self;
  Var label_bias;
  Var gate_w_fwd, gate_w_rev, gate_w_self;
  Var gate_bias;
};

// Plain neighborhood sum: every contribution is W v + b. The neighborhood is
// edge-induced: each directed edge contributes at both of its endpoints, and
// every vertex contributes to itself once.
std::vector<Var> gcn_vanilla(const std::vector<Var>& features, const RelationGraph& graph,
                             Var w, Var b);

// Direction-selected matrices and label-selected biases. include_reverse
// controls whether an edge also feeds its source vertex (ablation switch).
std::vector<Var> gcn_directional(const std::vector<Var>& features, const RelationGraph& graph,
                                 const GcnLayerVars& p, bool include_reverse = true);

// Same, with each contribution scaled by its edge-wise gate
// sigmoid(gate_w_dir . v + gate_bias[label]).
std::vector<Var> gcn_gated(const std::vector<Var>& features, const RelationGraph& graph,
                           const GcnLayerVars& p, bool include_reverse = true);

}  // namespace relcap
