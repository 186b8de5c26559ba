#include "relcap/model.hpp"

#include <stdexcept>

#include "relcap/gradcheck.hpp"
#include "relcap/semantic.hpp"

namespace relcap {

const char* graph_kind_name(GraphKind kind) {
  return kind == GraphKind::semantic ? "sem" : "spa";
}

GraphKind graph_kind_from_name(const std::string& name) {
  if (name == "sem" || name == "semantic") return GraphKind::semantic;
  if (name == "spa" || name == "spatial") return GraphKind::spatial;
  throw std::invalid_argument("unknown graph kind \"" + name + "\"");
}

namespace {

std::string gcn_prefix(GraphKind kind, std::size_t layer) {
  return std::string("gcn.") + graph_kind_name(kind) + ".l" + std::to_string(layer);
}

}  // namespace

void add_branch_params(ParamStore& store, const BranchDims& dims, Rng& rng) {
  if (dims.labels < 1) throw std::invalid_argument("branch: label count must be positive");
  std::size_t d = dims.dec.d_v;
  for (std::size_t layer = 0; layer < dims.gcn_layers; ++layer) {
    std::string p = gcn_prefix(dims.kind, layer);
    store.add(p + ".w1", glorot_uniform({d, d}, d, d, rng));
    store.add(p + ".w2", glorot_uniform({d, d}, d, d, rng));
    store.add(p + ".w3", glorot_uniform({d, d}, d, d, rng));
    store.add(p + ".b_lab", Tensor::zeros({dims.labels, d}));
    store.add(p + ".gate_w1", glorot_uniform({d}, d, 1, rng));
    store.add(p + ".gate_w2", glorot_uniform({d}, d, 1, rng));
    store.add(p + ".gate_w3", glorot_uniform({d}, d, 1, rng));
    store.add(p + ".gate_b", Tensor::zeros({dims.labels}));
  }
  add_decoder_params(store, dims.dec, rng);
}

BranchDims branch_dims_from_params(const ParamStore& store) {
  BranchDims dims;
  if (store.contains("gcn.sem.l0.w1")) {
    dims.kind = GraphKind::semantic;
  } else if (store.contains("gcn.spa.l0.w1")) {
    dims.kind = GraphKind::spatial;
  } else {
    throw std::runtime_error("branch: checkpoint has no gcn.sem.* or gcn.spa.* parameters");
  }
  std::size_t layers = 0;
  while (store.contains(gcn_prefix(dims.kind, layers) + ".w1")) ++layers;
  dims.gcn_layers = layers;
  dims.labels = store.at(gcn_prefix(dims.kind, 0) + ".b_lab").rows();
  dims.dec = decoder_dims_from_params(store);
  std::size_t d = store.at(gcn_prefix(dims.kind, 0) + ".w1").rows();
  if (d != dims.dec.d_v) {
    throw std::runtime_error("branch: gcn width " + std::to_string(d) +
                             " does not match decoder d_v " + std::to_string(dims.dec.d_v));
  }
  return dims;
}

GcnLayerVars gcn_layer_vars(const BoundParams& params, GraphKind kind, std::size_t layer) {
  std::string p = gcn_prefix(kind, layer);
  GcnLayerVars vars;
  vars.w_fwd = params.at(p + ".w1");
  vars.w_rev = params.at(p + ".w2");
  vars.w_self = params.at(p + ".w3");
  vars.label_bias = params.at(p + ".b_lab");
  vars.gate_w_fwd = params.at(p + ".gate_w1");
  vars.gate_w_rev = params.at(p + ".gate_w2");
  vars.gate_w_self = params.at(p + ".gate_w3");
  vars.gate_bias = params.at(p + ".gate_b");
  return vars;
}

std::vector<Var> encode_regions(const BoundParams& params, const BranchDims& dims,
                                const std::vector<Var>& features, const RelationGraph& graph) {
  std::vector<Var> out = features;
  for (std::size_t layer = 0; layer < dims.gcn_layers; ++layer) {
    out = gcn_gated(out, graph, gcn_layer_vars(params, dims.kind, layer), dims.gcn_reverse);
  }
  return out;
}

Var branch_sentence_loss(Tape& tape, const BoundParams& params, const BranchDims& dims,
                         const Scene& scene, const RelationGraph& graph,
                         const std::vector<std::size_t>& tokens) {
  std::vector<Var> features;
  features.reserve(scene.k());
  for (const Region& r : scene.regions) features.push_back(tape.constant(r.feature));
  std::vector<Var> encoded = encode_regions(params, dims, features, graph);
  return sentence_nll(params, dims.dec, encoded, tokens);
}

GradSuiteResult full_model_grad_suite(std::size_t n_instances, double tol, std::uint64_t seed,
                                      double step) {
  GradSuiteResult result;
  result.tol = tol;
  for (std::size_t i = 0; i < n_instances; ++i) {
    std::uint64_t instance_seed = Rng::derive(seed, 61 + i);
    Rng rng(instance_seed);
    GraphKind kind = i % 2 == 0 ? GraphKind::spatial : GraphKind::semantic;

    std::size_t k = 2 + rng.uniform_int(4);      // 2..5 regions
    std::size_t d_v = 4 + rng.uniform_int(5);    // 4..8
    std::size_t vocab = 8 + rng.uniform_int(5);  // 8..12
    std::size_t d_h = 3 + rng.uniform_int(4);
    std::size_t d_a = 3 + rng.uniform_int(3);
    std::size_t d_s1 = 3 + rng.uniform_int(3);

    Scene scene;
    scene.image_id = "grad_" + std::to_string(i);
    for (std::size_t r = 0; r < k; ++r) {
      double w = rng.uniform(0.1, 0.4);
      double h = rng.uniform(0.1, 0.4);
      double x1 = rng.uniform(0.0, 1.0 - w);
      double y1 = rng.uniform(0.0, 1.0 - h);
      Region region;
      region.box = {x1, y1, x1 + w, y1 + h};
      region.feature = Tensor::zeros({d_v});
      for (double& v : region.feature.data) v = rng.uniform(-1.0, 1.0);
      scene.regions.push_back(std::move(region));
    }

    RelationGraph graph = [&] {
      if (kind == GraphKind::spatial) {
        std::vector<BoundingBox> boxes;
        for (const Region& r : scene.regions) boxes.push_back(r.box);
        return build_spatial_graph(boxes);
      }
      std::size_t n_sem = 4;
      RelationGraph g(k, semantic_label_names(n_sem));
      for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t d = 0; d < k; ++d) {
          if (s != d && rng.uniform() < 0.5) {
            g.add_edge(s, d, 1 + static_cast<int>(rng.uniform_int(n_sem)));
          }
        }
      }
      return g;
    }();

    std::size_t caption_len = 2 + rng.uniform_int(3);
    std::vector<std::size_t> tokens;
    for (std::size_t t = 0; t < caption_len; ++t) {
      tokens.push_back(Vocabulary::kReserved + rng.uniform_int(vocab - Vocabulary::kReserved));
    }

    BranchDims dims;
    dims.kind = kind;
    dims.labels = graph.label_count();
    dims.dec = {vocab, d_v, d_h, d_a, d_s1};
    ParamStore params;
    add_branch_params(params, dims, rng);

    GradCheckReport report = grad_check(
        [&](Tape& tape, const BoundParams& bound) {
          return branch_sentence_loss(tape, bound, dims, scene, graph, tokens);
        },
        params, tol, step);

    result.instances.push_back({instance_seed, kind, report.worst, report.pass()});
    result.pass = result.pass && report.pass();
  }
  return result;
}

}  // namespace relcap
