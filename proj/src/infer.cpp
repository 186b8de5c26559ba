#include "relcap/infer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relcap/train.hpp"

namespace relcap {

const char* fusion_mode_name(FusionMode mode) {
  switch (mode) {
    case FusionMode::semantic: return "sem";
    case FusionMode::spatial: return "spa";
    case FusionMode::fused: return "fused";
  }
  return "?";
}

FusionMode fusion_mode_from_name(const std::string& name) {
  if (name == "sem" || name == "semantic") return FusionMode::semantic;
  if (name == "spa" || name == "spatial") return FusionMode::spatial;
  if (name == "fused") return FusionMode::fused;
  throw std::invalid_argument("unknown mode \"" + name + "\"");
}

std::vector<double> fuse(const std::vector<double>& p_sem, const std::vector<double>& p_spa,
                         double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("fuse: alpha " + std::to_string(alpha) + " outside [0,1]");
  }
  if (p_sem.size() != p_spa.size()) {
    throw std::invalid_argument("fuse: vocabulary sizes differ (" +
                                std::to_string(p_sem.size()) + " vs " +
                                std::to_string(p_spa.size()) + ")");
  }
  auto check_normalized = [](const std::vector<double>& p, const char* which) {
    double sum = 0.0;
    for (double v : p) sum += v;
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument(std::string("fuse: ") + which +
                                  " distribution sums to " + std::to_string(sum));
    }
  };
  check_normalized(p_sem, "semantic");
  check_normalized(p_spa, "spatial");
  std::vector<double> out(p_sem.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = alpha * p_sem[i] + (1.0 - alpha) * p_spa[i];
  }
  return out;
}

BranchDecoder::BranchDecoder(const ParamStore& params, const Scene& scene,
                             const RelationGraph& graph, bool gcn_reverse)
    : tape_(std::make_unique<Tape>()) {
  dims_ = branch_dims_from_params(params);
  dims_.gcn_reverse = gcn_reverse;
  if (scene.d_v() != dims_.dec.d_v) {
    throw std::invalid_argument("decode: scene features are " + std::to_string(scene.d_v()) +
                                "-d, checkpoint d_v=" + std::to_string(dims_.dec.d_v));
  }
  bound_ = bind(*tape_, params);
  std::vector<Var> features;
  features.reserve(scene.k());
  for (const Region& r : scene.regions) features.push_back(tape_->constant(r.feature));
  encoded_ = encode_regions(bound_, dims_, features, graph);
  v_bar_ = mean_list(encoded_);
}

DecoderState BranchDecoder::initial_state() {
  return initial_decoder_state(*tape_, dims_.dec.d_h);
}

BranchDecoder::Step BranchDecoder::step(const DecoderState& prev, std::size_t word_index) {
  DecoderStep out = decode_step(bound_, dims_.dec, prev, word_index, encoded_, v_bar_);
  Step step;
  step.probs = softmax(out.logits).value().data;
  step.lambda = out.attention.value().data;
  step.state = out.state;
  return step;
}

namespace {

struct Runtime {
  std::unique_ptr<BranchDecoder> sem;
  std::unique_ptr<BranchDecoder> spa;
  FusionMode mode;
  double alpha;
};

Runtime make_runtime(const Scene& scene, const ParamStore* sem_params,
                     const ParamStore* spa_params, const Vocabulary& vocab,
                     const GenConfig& config, std::size_t n_sem,
                     const ParamStore* relation_classifier) {
  Runtime rt;
  rt.mode = config.mode;
  rt.alpha = config.alpha;
  bool want_sem = config.mode != FusionMode::spatial;
  bool want_spa = config.mode != FusionMode::semantic;
  if (want_sem) {
    if (!sem_params) throw std::invalid_argument("decode: semantic checkpoint required");
    RelationGraph graph = scene_graph(scene, GraphKind::semantic, n_sem, relation_classifier);
    rt.sem = std::make_unique<BranchDecoder>(*sem_params, scene, graph, config.gcn_reverse);
    if (rt.sem->kind() != GraphKind::semantic) {
      throw std::invalid_argument("decode: checkpoint passed as semantic holds a spatial branch");
    }
  }
  if (want_spa) {
    if (!spa_params) throw std::invalid_argument("decode: spatial checkpoint required");
    RelationGraph graph = scene_graph(scene, GraphKind::spatial, n_sem, nullptr);
    rt.spa = std::make_unique<BranchDecoder>(*spa_params, scene, graph, config.gcn_reverse);
    if (rt.spa->kind() != GraphKind::spatial) {
      throw std::invalid_argument("decode: checkpoint passed as spatial holds a semantic branch");
    }
  }
  std::size_t vocab_size = vocab.size();
  for (BranchDecoder* d : {rt.sem.get(), rt.spa.get()}) {
    if (d && d->vocab_size() != vocab_size) {
      throw std::invalid_argument("decode: checkpoint vocabulary size " +
                                  std::to_string(d->vocab_size()) +
                                  " does not match vocab file size " +
                                  std::to_string(vocab_size));
    }
  }
  if (rt.sem && rt.spa && rt.sem->vocab_size() != rt.spa->vocab_size()) {
    throw std::invalid_argument("decode: checkpoints disagree on vocabulary size");
  }
  return rt;
}

struct BranchStates {
  DecoderState sem;
  DecoderState spa;
};

struct StepResult {
  std::vector<double> probs;
  std::vector<StepAttention> attention;
  BranchStates states;
};

StepResult advance(Runtime& rt, const BranchStates& prev, std::size_t token, std::size_t step) {
  StepResult out;
  if (rt.sem && rt.spa) {
    BranchDecoder::Step s = rt.sem->step(prev.sem, token);
    BranchDecoder::Step p = rt.spa->step(prev.spa, token);
    out.probs = fuse(s.probs, p.probs, rt.alpha);
    out.attention.push_back({step, GraphKind::semantic, std::move(s.lambda)});
    out.attention.push_back({step, GraphKind::spatial, std::move(p.lambda)});
    out.states = {s.state, p.state};
  } else if (rt.sem) {
    BranchDecoder::Step s = rt.sem->step(prev.sem, token);
    out.probs = std::move(s.probs);
    out.attention.push_back({step, GraphKind::semantic, std::move(s.lambda)});
    out.states.sem = s.state;
  } else {
    BranchDecoder::Step p = rt.spa->step(prev.spa, token);
    out.probs = std::move(p.probs);
    out.attention.push_back({step, GraphKind::spatial, std::move(p.lambda)});
    out.states.spa = p.state;
  }
  return out;
}

BranchStates initial_states(Runtime& rt) {
  BranchStates s;
  if (rt.sem) s.sem = rt.sem->initial_state();
  if (rt.spa) s.spa = rt.spa->initial_state();
  return s;
}

bool selectable(std::size_t token) {
  return token != Vocabulary::kBos && token != Vocabulary::kUnk;
}

std::string join_tokens(const Vocabulary& vocab, const std::vector<std::size_t>& tokens) {
  std::string caption;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) caption += " ";
    caption += vocab.word(tokens[i]);
  }
  return caption;
}

}  // namespace

GenResult greedy_generate(const Scene& scene, const ParamStore* sem_params,
                          const ParamStore* spa_params, const Vocabulary& vocab,
                          const GenConfig& config, std::size_t n_sem,
                          const ParamStore* relation_classifier) {
  if (config.max_len < 1) throw std::invalid_argument("decode: max_len must be >= 1");
  Runtime rt = make_runtime(scene, sem_params, spa_params, vocab, config, n_sem,
                            relation_classifier);
  BranchStates states = initial_states(rt);
  GenResult result;
  double cum = 0.0;
  std::size_t scored = 0;
  std::size_t token = Vocabulary::kBos;
  while (result.tokens.size() < config.max_len) {
    StepResult step = advance(rt, states, token, scored);
    std::size_t best = Vocabulary::kEos;
    double best_p = -1.0;
    for (std::size_t w = 0; w < step.probs.size(); ++w) {
      if (!selectable(w)) continue;
      if (step.probs[w] > best_p) {
        best_p = step.probs[w];
        best = w;
      }
    }
    cum += std::log(best_p);
    ++scored;
    for (StepAttention& a : step.attention) result.attention.push_back(std::move(a));
    states = step.states;
    if (best == Vocabulary::kEos) break;
    result.tokens.push_back(best);
    token = best;
  }
  result.score = scored == 0 ? 0.0 : cum / static_cast<double>(scored);
  result.caption = join_tokens(vocab, result.tokens);
  result.completed.emplace_back(result.caption, result.score);
  return result;
}

namespace {

struct Hypothesis {
  std::vector<std::size_t> tokens;  // content tokens, BOS implied at front
  double cum = 0.0;                 // cumulative log-probability
  std::size_t scored = 0;           // number of scored steps
  BranchStates states;
  std::vector<StepAttention> attention;

  double normalized() const {
    return scored == 0 ? 0.0 : cum / static_cast<double>(scored);
  }
};

}  // namespace

GenResult generate(const Scene& scene, const ParamStore* sem_params,
                   const ParamStore* spa_params, const Vocabulary& vocab,
                   const GenConfig& config, std::size_t n_sem,
                   const ParamStore* relation_classifier) {
  if (config.beam < 1) throw std::invalid_argument("decode: beam must be >= 1");
  if (config.max_len < 1) throw std::invalid_argument("decode: max_len must be >= 1");
  Runtime rt = make_runtime(scene, sem_params, spa_params, vocab, config, n_sem,
                            relation_classifier);

  std::vector<Hypothesis> live(1);
  live[0].states = initial_states(rt);
  std::vector<Hypothesis> completed;
  // any extension scores at most cum / max_scored once cum is negative
  double max_scored = static_cast<double>(config.max_len) + 1.0;

  for (std::size_t depth = 0; depth < config.max_len + 1 && !live.empty(); ++depth) {
    struct Candidate {
      std::size_t hyp;
      std::size_t token;
      double cum;
      double prob;
    };
    std::vector<Candidate> candidates;
    std::vector<StepResult> steps(live.size());
    for (std::size_t h = 0; h < live.size(); ++h) {
      std::size_t last = live[h].tokens.empty() ? Vocabulary::kBos : live[h].tokens.back();
      steps[h] = advance(rt, live[h].states, last, live[h].scored);
      for (std::size_t w = 0; w < steps[h].probs.size(); ++w) {
        if (!selectable(w) || steps[h].probs[w] <= 0.0) continue;
        candidates.push_back({h, w, live[h].cum + std::log(steps[h].probs[w]),
                              steps[h].probs[w]});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.cum != b.cum) return a.cum > b.cum;
      if (a.token != b.token) return a.token < b.token;
      return a.hyp < b.hyp;
    });
    if (candidates.size() > config.beam) candidates.resize(config.beam);

    std::vector<Hypothesis> next;
    for (const Candidate& c : candidates) {
      Hypothesis hyp = live[c.hyp];
      hyp.cum = c.cum;
      hyp.scored += 1;
      hyp.states = steps[c.hyp].states;
      for (const StepAttention& a : steps[c.hyp].attention) hyp.attention.push_back(a);
      if (c.token == Vocabulary::kEos) {
        completed.push_back(std::move(hyp));
      } else {
        hyp.tokens.push_back(c.token);
        if (hyp.tokens.size() >= config.max_len) {
          completed.push_back(std::move(hyp));
        } else {
          next.push_back(std::move(hyp));
        }
      }
    }
    live = std::move(next);

    if (!completed.empty() && !live.empty()) {
      double best_completed = completed[0].normalized();
      for (const Hypothesis& h : completed) {
        best_completed = std::max(best_completed, h.normalized());
      }
      double best_possible = live[0].cum / max_scored;
      for (const Hypothesis& h : live) {
        best_possible = std::max(best_possible, h.cum / max_scored);
      }
      if (best_possible < best_completed) break;  // pruned prefixes are discarded
    }
  }
  if (completed.empty()) throw std::runtime_error("decode: no hypothesis completed");

  std::size_t best = 0;
  for (std::size_t i = 1; i < completed.size(); ++i) {
    if (completed[i].normalized() > completed[best].normalized()) best = i;
  }
  GenResult result;
  result.tokens = completed[best].tokens;
  result.caption = join_tokens(vocab, result.tokens);
  result.score = completed[best].normalized();
  result.attention = completed[best].attention;
  for (const Hypothesis& h : completed) {
    result.completed.emplace_back(join_tokens(vocab, h.tokens), h.normalized());
  }
  return result;
}

}  // namespace relcap
