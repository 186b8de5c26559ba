#include "relcap/train.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "relcap/adam.hpp"
#include "relcap/rng.hpp"

namespace relcap {

using nlohmann::json;

TrainConfig TrainConfig::paper() {
  TrainConfig c;
  c.lr = 5e-4;
  c.batch = 1024;
  c.iterations = 30000;
  c.k_max = 36;
  c.d_v = 2048;
  c.d_h = 1000;
  c.d_a = 512;
  c.d_s1 = 1000;
  c.vocab_min_count = 5;
  c.n_sem = 20;
  return c;
}

std::string TrainConfig::to_json() const {
  json doc = json::object();
  doc["lr"] = lr;
  doc["batch"] = batch;
  doc["iterations"] = iterations;
  doc["k_max"] = k_max;
  doc["d_v"] = d_v;
  doc["d_h"] = d_h;
  doc["d_a"] = d_a;
  doc["d_s1"] = d_s1;
  doc["vocab_min_count"] = vocab_min_count;
  doc["gcn_layers"] = gcn_layers;
  doc["gcn_reverse"] = gcn_reverse;
  doc["grad_clip"] = grad_clip;
  doc["n_sem"] = n_sem;
  doc["seed"] = seed;
  return doc.dump();
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  json doc = json::parse(text);
  TrainConfig c;
  if (doc.contains("preset")) {
    std::string preset = doc.at("preset").get<std::string>();
    if (preset == "paper") {
      c = paper();
    } else if (preset != "desk") {
      throw std::invalid_argument("config: unknown preset \"" + preset + "\"");
    }
  }
  auto get = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("lr", c.lr);
  get("batch", c.batch);
  get("iterations", c.iterations);
  get("k_max", c.k_max);
  get("d_v", c.d_v);
  get("d_h", c.d_h);
  get("d_a", c.d_a);
  get("d_s1", c.d_s1);
  get("vocab_min_count", c.vocab_min_count);
  get("gcn_layers", c.gcn_layers);
  get("gcn_reverse", c.gcn_reverse);
  get("grad_clip", c.grad_clip);
  get("n_sem", c.n_sem);
  get("seed", c.seed);
  if (c.lr <= 0 || c.batch == 0 || c.iterations == 0 || c.k_max == 0 || c.d_v == 0 ||
      c.d_h == 0 || c.d_a == 0 || c.d_s1 == 0 || c.gcn_layers == 0) {
    throw std::invalid_argument("config: sizes and rates must be positive");
  }
  return c;
}

TrainConfig TrainConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open \"" + path + "\"");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

RelationGraph scene_graph(const Scene& scene, GraphKind kind, std::size_t n_sem,
                          const ParamStore* relation_classifier) {
  if (kind == GraphKind::spatial) {
    std::vector<BoundingBox> boxes;
    boxes.reserve(scene.k());
    for (const Region& r : scene.regions) boxes.push_back(r.box);
    return build_spatial_graph(boxes);
  }
  if (scene.semantic_edges) {
    RelationGraph graph(scene.k(), semantic_label_names(n_sem));
    for (const GraphEdge& e : *scene.semantic_edges) graph.add_edge(e.src, e.dst, e.label);
    return graph;
  }
  if (relation_classifier) {
    std::vector<Tensor> features;
    features.reserve(scene.k());
    for (const Region& r : scene.regions) features.push_back(r.feature);
    return build_semantic_graph(features, scene.union_features, *relation_classifier);
  }
  throw std::runtime_error("scene \"" + scene.image_id +
                           "\": no semantic edges and no relation classifier given");
}

namespace {

void clip_gradients(ParamStore& grads, double clip) {
  double sq = 0.0;
  for (const auto& [name, g] : grads) {
    for (double v : g.data) sq += v * v;
  }
  double norm = std::sqrt(sq);
  if (norm <= clip) return;
  double factor = clip / norm;
  for (auto& [name, g] : grads) {
    for (double& v : g.data) v *= factor;
  }
}

}  // namespace

TrainResult train_branch(const std::vector<Scene>& scenes, GraphKind kind,
                         const TrainConfig& config, const ParamStore* relation_classifier) {
  if (scenes.empty()) throw std::invalid_argument("train: no scenes");
  std::vector<std::string> all_captions;
  for (const Scene& scene : scenes) {
    if (scene.captions.empty()) {
      throw std::invalid_argument("train: scene \"" + scene.image_id + "\" has no captions");
    }
    if (scene.k() > config.k_max) {
      throw std::invalid_argument("train: scene \"" + scene.image_id + "\" has " +
                                  std::to_string(scene.k()) + " regions, k_max=" +
                                  std::to_string(config.k_max));
    }
    if (scene.d_v() != config.d_v) {
      throw std::invalid_argument("train: scene \"" + scene.image_id + "\" features are " +
                                  std::to_string(scene.d_v()) + "-d, config d_v=" +
                                  std::to_string(config.d_v));
    }
    all_captions.insert(all_captions.end(), scene.captions.begin(), scene.captions.end());
  }

  TrainResult result;
  result.vocab = build_vocab(all_captions, config.vocab_min_count);

  std::vector<RelationGraph> graphs;
  std::vector<std::vector<std::vector<std::size_t>>> tokenized(scenes.size());
  graphs.reserve(scenes.size());
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    graphs.push_back(scene_graph(scenes[s], kind, config.n_sem, relation_classifier));
    for (const std::string& caption : scenes[s].captions) {
      tokenized[s].push_back(result.vocab.encode(tokenize(caption)));
    }
  }

  BranchDims dims;
  dims.kind = kind;
  dims.labels = graphs[0].label_count();
  dims.gcn_layers = config.gcn_layers;
  dims.gcn_reverse = config.gcn_reverse;
  dims.dec = {result.vocab.size(), config.d_v, config.d_h, config.d_a, config.d_s1};

  Rng init_rng(Rng::derive(config.seed, 51));
  add_branch_params(result.params, dims, init_rng);
  Rng sample_rng(Rng::derive(config.seed, 52));

  Adam adam(AdamConfig{config.lr});
  std::size_t batch = std::min(config.batch, scenes.size());
  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    Tape tape;
    BoundParams bound = bind(tape, result.params);
    std::vector<Var> losses;
    std::vector<std::size_t> batch_scenes;
    for (std::size_t b = 0; b < batch; ++b) {
      std::size_t s = (iter * batch + b) % scenes.size();
      std::size_t c = sample_rng.uniform_int(tokenized[s].size());
      batch_scenes.push_back(s);
      losses.push_back(
          branch_sentence_loss(tape, bound, dims, scenes[s], graphs[s], tokenized[s][c]));
    }
    Var loss = mean_list(losses);
    double loss_value = loss.value().data[0];
    if (!std::isfinite(loss_value)) {
      std::string blame = scenes[batch_scenes[0]].image_id;
      for (std::size_t b = 0; b < losses.size(); ++b) {
        if (!std::isfinite(losses[b].value().data[0])) {
          blame = scenes[batch_scenes[b]].image_id;
          break;
        }
      }
      throw std::runtime_error("train: non-finite loss at iteration " + std::to_string(iter) +
                               " (scene \"" + blame + "\")");
    }
    tape.backward(loss);
    ParamStore grads = bound.grads();
    if (config.grad_clip > 0.0) clip_gradients(grads, config.grad_clip);
    adam.step(result.params, grads);
    result.loss_curve.emplace_back(iter, loss_value);
  }

  result.final_corpus_nll = corpus_nll(result.params, result.vocab, scenes, config,
                                       relation_classifier);
  return result;
}

double corpus_nll(const ParamStore& params, const Vocabulary& vocab,
                  const std::vector<Scene>& scenes, const TrainConfig& config,
                  const ParamStore* relation_classifier) {
  BranchDims dims = branch_dims_from_params(params);
  dims.gcn_reverse = config.gcn_reverse;
  double total = 0.0;
  std::size_t count = 0;
  for (const Scene& scene : scenes) {
    RelationGraph graph = scene_graph(scene, dims.kind, config.n_sem, relation_classifier);
    for (const std::string& caption : scene.captions) {
      Tape tape;
      BoundParams bound = bind(tape, params);
      Var loss =
          branch_sentence_loss(tape, bound, dims, scene, graph, vocab.encode(tokenize(caption)));
      total += loss.value().data[0];
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

std::string loss_curve_csv(const std::vector<std::pair<std::size_t, double>>& curve) {
  std::ostringstream out;
  out << "iteration,loss\n";
  char buf[32];
  for (const auto& [iter, loss] : curve) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), loss);
    out << iter << "," << std::string_view(buf, end - buf) << "\n";
  }
  return out.str();
}

}  // namespace relcap
