#pragma once

#include <string>
#include <vector>

#include "relcap/decoder.hpp"
#include "relcap/gcn.hpp"
#include "relcap/graph.hpp"
#include "relcap/params.hpp"
#include "relcap/scene.hpp"

namespace relcap {

enum class GraphKind { semantic, spatial };

const char* graph_kind_name(GraphKind kind);        // "sem" / "spa"
GraphKind graph_kind_from_name(const std::string&); // accepts sem/spa/semantic/spatial

// One branch: a stack of gated graph convolutions over one relation kind,
// feeding the attention LSTM decoder. GCN parameters live under
// "gcn.<kind>.l<layer>.*", decoder parameters under "dec.*".
struct BranchDims {
  GraphKind kind = GraphKind::spatial;
  std::size_t labels = 0;  // graph label vocabulary incl. the self label
  std::size_t gcn_layers = 1;
  bool gcn_reverse = true;
  DecoderDims dec;
};

void add_branch_params(ParamStore& store, const BranchDims& dims, Rng& rng);

// Recovers dimensions from checkpoint shapes; the relation kind is detected
// from the parameter prefix. gcn_reverse is a runtime switch, not stored.
BranchDims branch_dims_from_params(const ParamStore& store);

GcnLayerVars gcn_layer_vars(const BoundParams& params, GraphKind kind, std::size_t layer);

std::vector<Var> encode_regions(const BoundParams& params, const BranchDims& dims,
                                const std::vector<Var>& features, const RelationGraph& graph);

// Teacher-forced sentence loss of one caption for one scene, end to end
// through the encoder.
Var branch_sentence_loss(Tape& tape, const BoundParams& params, const BranchDims& dims,
                         const Scene& scene, const RelationGraph& graph,
                         const std::vector<std::size_t>& tokens);

// Finite-difference check of the full branch loss on randomly drawn small
// instances (K <= 5, d_v <= 8, |V| <= 12), every parameter tensor, graph
// kinds alternating.
struct GradSuiteResult {
  struct Instance {
    std::uint64_t seed = 0;
    GraphKind kind = GraphKind::spatial;
    double worst = 0.0;
    bool pass = false;
  };
  std::vector<Instance> instances;
  double tol = 0.0;
  bool pass = true;
};

GradSuiteResult full_model_grad_suite(std::size_t n_instances, double tol,
                                      std::uint64_t seed = 1, double step = 1e-5);

}  // namespace relcap
