#include "relcap/semantic.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "relcap/adam.hpp"

namespace relcap {

using nlohmann::json;

void add_relation_classifier_params(ParamStore& store, const RelationClassifierDims& dims,
                                    Rng& rng) {
  if (dims.n_classes < 1) throw std::invalid_argument("relation classifier: need >= 1 class");
  std::size_t out = dims.n_classes + 1;
  for (const char* part : {"subj", "obj", "union"}) {
    store.add(std::string("relcls.") + part + ".w",
              glorot_uniform({dims.d_e, dims.d_v}, dims.d_v, dims.d_e, rng));
    store.add(std::string("relcls.") + part + ".b", Tensor::zeros({dims.d_e}));
  }
  store.add("relcls.out.w", glorot_uniform({out, 3 * dims.d_e}, 3 * dims.d_e, out, rng));
  store.add("relcls.out.b", Tensor::zeros({out}));
}

RelationClassifierDims relation_classifier_dims_from_params(const ParamStore& store) {
  const Tensor& subj = store.at("relcls.subj.w");
  const Tensor& out = store.at("relcls.out.w");
  RelationClassifierDims dims;
  dims.d_e = subj.rows();
  dims.d_v = subj.cols();
  if (out.rows() < 2) throw std::runtime_error("relation classifier: output layer too small");
  dims.n_classes = out.rows() - 1;
  return dims;
}

Var relation_logits(const BoundParams& params, Var subject, Var object, Var union_feat) {
  Var es = relu(affine(params.at("relcls.subj.w"), subject, params.at("relcls.subj.b")));
  Var eo = relu(affine(params.at("relcls.obj.w"), object, params.at("relcls.obj.b")));
  Var eu = relu(affine(params.at("relcls.union.w"), union_feat, params.at("relcls.union.b")));
  return affine(params.at("relcls.out.w"), concat({es, eo, eu}), params.at("relcls.out.b"));
}

std::vector<double> classify_relation(const ParamStore& params, const Tensor& subject,
                                      const Tensor& object, const Tensor& union_feat) {
  RelationClassifierDims dims = relation_classifier_dims_from_params(params);
  for (const Tensor* t : {&subject, &object, &union_feat}) {
    if (!t->is_vector() || t->shape[0] != dims.d_v) {
      throw std::invalid_argument("relation classifier: feature shape " + shape_str(t->shape) +
                                  " does not match d_v=" + std::to_string(dims.d_v));
    }
  }
  Tape tape;
  BoundParams bound = bind(tape, params);
  Var probs = softmax(relation_logits(bound, tape.constant(subject), tape.constant(object),
                                      tape.constant(union_feat)));
  return probs.value().data;
}

std::vector<std::string> semantic_label_names(std::size_t n_classes) {
  std::vector<std::string> names{"self"};
  for (std::size_t c = 1; c <= n_classes; ++c) names.push_back("rel_" + std::to_string(c));
  return names;
}

RelationGraph build_semantic_graph(std::size_t vertex_count, std::size_t n_classes,
                                   const PairClassifier& classify) {
  RelationGraph graph(vertex_count, semantic_label_names(n_classes));
  for (std::size_t i = 0; i < vertex_count; ++i) {
    for (std::size_t j = 0; j < vertex_count; ++j) {
      if (i == j) continue;
      std::vector<double> probs = classify(i, j);
      if (probs.size() != n_classes + 1) {
        throw std::invalid_argument("semantic graph: classifier returned " +
                                    std::to_string(probs.size()) + " probabilities, expected " +
                                    std::to_string(n_classes + 1));
      }
      if (probs[0] < 0.5) {
        std::size_t best = 1;
        for (std::size_t c = 2; c <= n_classes; ++c) {
          if (probs[c] > probs[best]) best = c;
        }
        graph.add_edge(i, j, static_cast<int>(best));
      }
    }
  }
  return graph;
}

RelationGraph build_semantic_graph(const std::vector<Tensor>& features,
                                   const UnionFeatures& union_features,
                                   const ParamStore& params) {
  RelationClassifierDims dims = relation_classifier_dims_from_params(params);
  return build_semantic_graph(
      features.size(), dims.n_classes, [&](std::size_t i, std::size_t j) {
        auto it = union_features.find({i, j});
        if (it == union_features.end()) {
          throw std::invalid_argument("semantic graph: missing union feature for pair (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
        return classify_relation(params, features[i], features[j], it->second);
      });
}

RelationGraph load_semantic_edges(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("semantic graph: cannot open \"" + path + "\"");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return RelationGraph::from_json(text);
}

Var relation_pair_loss(const BoundParams& params, Tape& tape, const LabeledPair& pair) {
  Var logits = relation_logits(params, tape.constant(pair.subject), tape.constant(pair.object),
                               tape.constant(pair.union_feat));
  return cross_entropy(logits, pair.label);
}

RelationTrainResult train_relation_classifier(const std::vector<LabeledPair>& pairs,
                                              const RelationClassifierDims& dims,
                                              const RelationTrainConfig& config,
                                              ParamStore& params_out) {
  if (pairs.empty()) throw std::invalid_argument("relation classifier: no training pairs");
  for (const LabeledPair& p : pairs) {
    if (p.label > dims.n_classes) {
      throw std::invalid_argument("relation classifier: label " + std::to_string(p.label) +
                                  " out of range (n_classes=" + std::to_string(dims.n_classes) +
                                  ")");
    }
  }

  RelationTrainResult result;
  std::vector<bool> seen(dims.n_classes + 1, false);
  for (const LabeledPair& p : pairs) seen[p.label] = true;
  for (std::size_t c = 0; c <= dims.n_classes; ++c) {
    if (!seen[c]) result.missing_classes.push_back(c);
  }

  Rng init_rng(Rng::derive(config.seed, 11));
  Rng sample_rng(Rng::derive(config.seed, 12));
  params_out = ParamStore{};
  add_relation_classifier_params(params_out, dims, init_rng);

  Adam adam(AdamConfig{config.lr});
  std::size_t batch = std::min<std::size_t>(std::max<std::size_t>(config.batch, 1), pairs.size());
  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    Tape tape;
    BoundParams bound = bind(tape, params_out);
    std::vector<Var> losses;
    for (std::size_t b = 0; b < batch; ++b) {
      losses.push_back(relation_pair_loss(bound, tape, pairs[sample_rng.uniform_int(pairs.size())]));
    }
    Var loss = mean_list(losses);
    if (iter == 0) result.initial_loss = loss.value().data[0];
    result.final_loss = loss.value().data[0];
    tape.backward(loss);
    ParamStore grads = bound.grads();
    adam.step(params_out, grads);
  }
  return result;
}

double relation_accuracy(const ParamStore& params, const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const LabeledPair& p : pairs) {
    std::vector<double> probs = classify_relation(params, p.subject, p.object, p.union_feat);
    std::size_t best = 0;
    for (std::size_t c = 1; c < probs.size(); ++c) {
      if (probs[c] > probs[best]) best = c;
    }
    if (best == p.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

std::vector<LabeledPair> generate_relation_pairs(const PairGenConfig& config) {
  if (config.d_v < config.n_categories + config.n_classes + 1) {
    throw std::invalid_argument("relation pairs: d_v must cover category and class blocks");
  }
  Rng rng(Rng::derive(config.seed, 21));
  std::vector<LabeledPair> pairs;
  pairs.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    LabeledPair p;
    p.label = rng.uniform_int(config.n_classes + 1);
    std::size_t cat_a = rng.uniform_int(config.n_categories);
    std::size_t cat_b = rng.uniform_int(config.n_categories);
    p.subject = Tensor::zeros({config.d_v});
    p.object = Tensor::zeros({config.d_v});
    for (std::size_t d = 0; d < config.d_v; ++d) {
      p.subject.data[d] = rng.uniform(-config.noise, config.noise);
      p.object.data[d] = rng.uniform(-config.noise, config.noise);
    }
    p.subject.data[cat_a] += 1.0;
    p.object.data[cat_b] += 1.0;
    p.union_feat = Tensor::zeros({config.d_v});
    for (std::size_t d = 0; d < config.d_v; ++d) {
      p.union_feat.data[d] = std::max(p.subject.data[d], p.object.data[d]) +
                             rng.uniform(-config.noise, config.noise);
    }
    // class signature in the tail block makes the task linearly separable
    p.union_feat.data[config.d_v - (config.n_classes + 1) + p.label] += 1.0;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::string labeled_pairs_to_jsonl(const std::vector<LabeledPair>& pairs) {
  std::ostringstream out;
  for (const LabeledPair& p : pairs) {
    json rec = json::object();
    rec["subject_feature"] = p.subject.data;
    rec["object_feature"] = p.object.data;
    rec["union_feature"] = p.union_feat.data;
    rec["label"] = p.label;
    out << rec.dump() << "\n";
  }
  return out.str();
}

std::vector<LabeledPair> labeled_pairs_from_jsonl(const std::string& text) {
  std::vector<LabeledPair> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
      LabeledPair p;
      p.subject = Tensor::vec(rec.at("subject_feature").get<std::vector<double>>());
      p.object = Tensor::vec(rec.at("object_feature").get<std::vector<double>>());
      p.union_feat = Tensor::vec(rec.at("union_feature").get<std::vector<double>>());
      p.label = rec.at("label").get<std::size_t>();
      pairs.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw std::runtime_error("labeled pairs: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pairs;
}

}  // namespace relcap
