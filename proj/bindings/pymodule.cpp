#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>

#include "relcap/bleu.hpp"
#include "relcap/checkpoint.hpp"
#include "relcap/eval.hpp"
#include "relcap/infer.hpp"
#include "relcap/scene.hpp"
#include "relcap/semantic.hpp"
#include "relcap/synth.hpp"
#include "relcap/train.hpp"

namespace py = pybind11;
using namespace relcap;

namespace {

BoundingBox box_from(const std::vector<double>& b) {
  if (b.size() != 4) throw std::invalid_argument("box needs 4 coordinates [x1, y1, x2, y2]");
  return {b[0], b[1], b[2], b[3]};
}

std::optional<ParamStore> maybe_load(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_checkpoint(path);
}

py::dict graph_to_dict(const RelationGraph& graph) {
  py::dict out;
  out["k"] = graph.vertex_count();
  py::list edges;
  for (const GraphEdge& e : graph.edges()) {
    py::dict edge;
    edge["src"] = e.src;
    edge["dst"] = e.dst;
    edge["label"] = e.label;
    edges.append(edge);
  }
  out["edges"] = edges;
  out["labels"] = graph.label_names();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relation-graph image captioner: spatial/semantic graphs, gated graph "
            "convolutions, attention-LSTM decoding, late fusion, BLEU.";

  m.def("iou", [](const std::vector<double>& a, const std::vector<double>& b) {
    return iou(box_from(a), box_from(b));
  }, py::arg("a"), py::arg("b"), "Intersection over union of two boxes");

  m.def("classify_spatial",
        [](const std::vector<double>& a, const std::vector<double>& b) -> py::object {
          auto cls = classify_spatial(box_from(a), box_from(b));
          if (!cls) return py::none();
          return py::int_(*cls);
        },
        py::arg("a"), py::arg("b"),
        "Spatial relation class 1..11 of b relative to a, or None for no edge");

  m.def("spatial_class_name", &spatial_class_name, py::arg("class_id"));

  m.def("relative_geometry", [](const std::vector<double>& a, const std::vector<double>& b) {
    RelativeGeometry g = relative_geometry(box_from(a), box_from(b));
    py::dict out;
    out["distance"] = g.distance;
    out["angle_deg"] = g.angle_deg;
    out["diagonal_ratio"] = g.diagonal_ratio;
    out["coincident"] = g.coincident;
    return out;
  }, py::arg("a"), py::arg("b"));

  m.def("build_spatial_graph", [](const std::vector<std::vector<double>>& boxes) {
    std::vector<BoundingBox> bb;
    for (const auto& b : boxes) bb.push_back(box_from(b));
    return graph_to_dict(build_spatial_graph(bb));
  }, py::arg("boxes"));

  m.def("fuse", &fuse, py::arg("p_sem"), py::arg("p_spa"), py::arg("alpha"),
        "alpha * p_sem + (1 - alpha) * p_spa, elementwise");

  m.def("corpus_bleu", &corpus_bleu, py::arg("candidates"), py::arg("references"),
        py::arg("max_n"), "Corpus BLEU@N with clipping and brevity penalty");

  m.def("tokenize", &tokenize, py::arg("text"));

  m.def("gen_data", [](const std::string& out, std::size_t n_scenes, std::size_t k,
                       std::size_t d_v, std::uint64_t seed, std::size_t captions_min,
                       std::size_t captions_max) {
    SynthConfig config;
    config.n_scenes = n_scenes;
    config.k = k;
    config.d_v = d_v;
    config.seed = seed;
    config.captions_min = captions_min;
    config.captions_max = captions_max;
    std::vector<Scene> scenes = generate_synthetic_corpus(config);
    save_scenes(scenes, out);
    return scenes.size();
  }, py::arg("out"), py::arg("n_scenes") = 50, py::arg("k") = 6, py::arg("d_v") = 64,
     py::arg("seed") = 1, py::arg("captions_min") = 1, py::arg("captions_max") = 5,
     "Write a synthetic corpus (.jsonl); deterministic given the seed");

  m.def("train", [](const std::string& scenes_path, const std::string& graph_kind,
                    const std::string& ckpt_out, const std::string& vocab_out,
                    const std::string& config_json, std::optional<std::uint64_t> seed) {
    TrainConfig config =
        config_json.empty() ? TrainConfig::desk() : TrainConfig::from_json(config_json);
    if (seed) config.seed = *seed;
    std::vector<Scene> scenes = load_scenes(scenes_path, config.k_max);
    TrainResult result = train_branch(scenes, graph_kind_from_name(graph_kind), config);
    save_checkpoint(result.params, ckpt_out);
    if (!vocab_out.empty()) result.vocab.save(vocab_out);
    return result.final_corpus_nll;
  }, py::arg("scenes"), py::arg("graph_kind"), py::arg("ckpt_out"), py::arg("vocab_out") = "",
     py::arg("config_json") = "", py::arg("seed") = std::nullopt,
     "Train one branch; returns the final mean corpus NLL");

  m.def("caption", [](const std::string& scenes_path, const std::string& mode,
                      const std::string& ckpt_sem, const std::string& ckpt_spa,
                      const std::string& vocab_path, double alpha, std::size_t beam,
                      std::size_t max_len, std::size_t k_max) {
    GenConfig config;
    config.mode = fusion_mode_from_name(mode);
    config.alpha = alpha;
    config.beam = beam;
    config.max_len = max_len;
    std::vector<Scene> scenes = load_scenes(scenes_path, k_max);
    Vocabulary vocab = Vocabulary::load(vocab_path);
    std::optional<ParamStore> sem = maybe_load(ckpt_sem);
    std::optional<ParamStore> spa = maybe_load(ckpt_spa);
    py::list out;
    for (const Scene& scene : scenes) {
      GenResult gen = generate(scene, sem ? &*sem : nullptr, spa ? &*spa : nullptr, vocab,
                               config);
      py::dict rec;
      rec["image_id"] = scene.image_id;
      rec["caption"] = gen.caption;
      rec["score"] = gen.score;
      out.append(rec);
    }
    return out;
  }, py::arg("scenes"), py::arg("mode"), py::arg("ckpt_sem") = "", py::arg("ckpt_spa") = "",
     py::arg("vocab") = "", py::arg("alpha") = 0.7, py::arg("beam") = 3,
     py::arg("max_len") = 20, py::arg("k_max") = kDefaultKMax);

  m.def("evaluate", [](const std::string& scenes_path, const std::string& mode,
                       const std::string& ckpt_sem, const std::string& ckpt_spa,
                       const std::string& vocab_path, double alpha, std::size_t beam,
                       std::size_t max_len, std::size_t k_max) {
    GenConfig config;
    config.mode = fusion_mode_from_name(mode);
    config.alpha = alpha;
    config.beam = beam;
    config.max_len = max_len;
    std::vector<Scene> scenes = load_scenes(scenes_path, k_max);
    Vocabulary vocab = Vocabulary::load(vocab_path);
    std::optional<ParamStore> sem = maybe_load(ckpt_sem);
    std::optional<ParamStore> spa = maybe_load(ckpt_spa);
    EvalReport report = evaluate_scenes(scenes, sem ? &*sem : nullptr, spa ? &*spa : nullptr,
                                        vocab, config);
    py::dict out;
    out["bleu1"] = report.bleu[0];
    out["bleu2"] = report.bleu[1];
    out["bleu3"] = report.bleu[2];
    out["bleu4"] = report.bleu[3];
    py::list records;
    for (const EvalRecord& r : report.records) {
      py::dict rec;
      rec["image_id"] = r.image_id;
      rec["caption"] = r.caption;
      rec["score"] = r.score;
      records.append(rec);
    }
    out["records"] = records;
    return out;
  }, py::arg("scenes"), py::arg("mode"), py::arg("ckpt_sem") = "", py::arg("ckpt_spa") = "",
     py::arg("vocab") = "", py::arg("alpha") = 0.7, py::arg("beam") = 3,
     py::arg("max_len") = 20, py::arg("k_max") = kDefaultKMax);

  m.def("gradcheck", [](std::size_t instances, double tol, std::uint64_t seed) {
    GradSuiteResult result = full_model_grad_suite(instances, tol, seed);
    py::list rows;
    for (const auto& inst : result.instances) {
      py::dict row;
      row["seed"] = inst.seed;
      row["kind"] = graph_kind_name(inst.kind);
      row["max_rel"] = inst.worst;
      row["pass"] = inst.pass;
      rows.append(row);
    }
    py::dict out;
    out["pass"] = result.pass;
    out["instances"] = rows;
    return out;
  }, py::arg("instances") = 5, py::arg("tol") = 1e-4, py::arg("seed") = 1,
     "Finite-difference check of the full model on random small instances");
}
