#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relcap/graph.hpp"
#include "relcap/params.hpp"
#include "relcap/rng.hpp"

namespace relcap {

// Classifier head over an ordered region pair: subject, object and union
// features are each embedded (affine + ReLU), concatenated, and classified
// over n_classes relation predicates plus a non-relation class at index 0.
struct RelationClassifierDims {
  std::size_t d_v = 0;
  std::size_t d_e = 0;        // embedding width, default ceil(d_v / 2)
  std::size_t n_classes = 0;  // relation classes, excluding non-relation

  static RelationClassifierDims defaults(std::size_t d_v, std::size_t n_classes) {
    return {d_v, (d_v + 1) / 2, n_classes};
  }
};

void add_relation_classifier_params(ParamStore& store, const RelationClassifierDims& dims,
                                    Rng& rng);
RelationClassifierDims relation_classifier_dims_from_params(const ParamStore& store);

// Tape path, shared by training and inference.
Var relation_logits(const BoundParams& params, Var subject, Var object, Var union_feat);

// Probability vector over n_classes + 1 entries; index 0 is non-relation.
std::vector<double> classify_relation(const ParamStore& params, const Tensor& subject,
                                      const Tensor& object, const Tensor& union_feat);

using PairKey = std::pair<std::size_t, std::size_t>;
using UnionFeatures = std::map<PairKey, Tensor>;

std::vector<std::string> semantic_label_names(std::size_t n_classes);

// Probability provider for an ordered pair; lets tests drive graph building
// with hand-built distributions.
using PairClassifier = std::function<std::vector<double>(std::size_t, std::size_t)>;

// An edge i->j with the argmax relation label is established iff the
// non-relation probability is strictly below 0.5. Argmax ties go to the
// lowest class index.
RelationGraph build_semantic_graph(std::size_t vertex_count, std::size_t n_classes,
                                   const PairClassifier& classify);

RelationGraph build_semantic_graph(const std::vector<Tensor>& features,
                                   const UnionFeatures& union_features,
                                   const ParamStore& params);

// Reads a graph export file; labels must be semantic (non-self) labels.
RelationGraph load_semantic_edges(const std::string& path);

// --- classifier training ----------------------------------------------

struct LabeledPair {
  Tensor subject, object, union_feat;
  std::size_t label = 0;  // 0 = non-relation
};

struct RelationTrainConfig {
  std::size_t iterations = 400;
  std::size_t batch = 16;
  double lr = 5e-4;
  std::uint64_t seed = 1;
};

struct RelationTrainResult {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<std::size_t> missing_classes;  // classes absent from the data
};

Var relation_pair_loss(const BoundParams& params, Tape& tape, const LabeledPair& pair);

RelationTrainResult train_relation_classifier(const std::vector<LabeledPair>& pairs,
                                              const RelationClassifierDims& dims,
                                              const RelationTrainConfig& config,
                                              ParamStore& params_out);

double relation_accuracy(const ParamStore& params, const std::vector<LabeledPair>& pairs);

// --- synthetic pairs ----------------------------------------------------

struct PairGenConfig {
  std::size_t n = 500;
  std::size_t d_v = 32;
  std::size_t n_classes = 4;
  std::size_t n_categories = 10;
  double noise = 0.05;
  std::uint64_t seed = 1;
};

// Pairs whose union feature carries a one-hot class signature in its tail
// block, so the task is linearly separable and the generator's labels are
// the ground truth.
std::vector<LabeledPair> generate_relation_pairs(const PairGenConfig& config);

std::string labeled_pairs_to_jsonl(const std::vector<LabeledPair>& pairs);
std::vector<LabeledPair> labeled_pairs_from_jsonl(const std::string& text);

}  // namespace relcap
