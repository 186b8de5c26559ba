#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relcap/checkpoint.hpp"
#include "relcap/eval.hpp"
#include "relcap/infer.hpp"
#include "relcap/scene.hpp"
#include "relcap/semantic.hpp"
#include "relcap/synth.hpp"
#include "relcap/train.hpp"

namespace {

using nlohmann::json;
using namespace relcap;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
  out << text;
}

TrainConfig config_from_options(const std::string& config_path,
                                std::optional<std::uint64_t> seed) {
  TrainConfig config = config_path.empty() ? TrainConfig::desk() : TrainConfig::load(config_path);
  if (seed) config.seed = *seed;
  return config;
}

std::optional<ParamStore> maybe_load(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_checkpoint(path);
}

int run(int argc, char** argv) {
  CLI::App app{"Relation-graph image captioner: graph construction, gated graph-convolution "
               "encoding, attention-LSTM decoding, late fusion and BLEU evaluation."};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Override the seed of the chosen subcommand");

  // --- gen-data ---
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic corpus or relation pairs");
  std::string gen_out, gen_kind = "scenes";
  SynthConfig synth;
  PairGenConfig pairgen;
  gen->add_option("--out", gen_out, "Output path (.jsonl)")->required();
  gen->add_option("--kind", gen_kind, "scenes | relation-pairs")
      ->check(CLI::IsMember({"scenes", "relation-pairs"}));
  gen->add_option("--n-scenes", synth.n_scenes, "Scenes to generate");
  gen->add_option("--k", synth.k, "Regions per scene");
  gen->add_option("--d-v", synth.d_v, "Region feature width");
  gen->add_option("--n-categories", synth.n_categories, "Object categories");
  gen->add_option("--n-sem", synth.n_sem, "Semantic edge classes");
  gen->add_option("--captions-min", synth.captions_min, "Captions per scene, lower bound");
  gen->add_option("--captions-max", synth.captions_max, "Captions per scene, upper bound");
  gen->add_option("--noise", synth.noise, "Feature noise amplitude");
  gen->add_option("--n-pairs", pairgen.n, "Labeled pairs (relation-pairs kind)");
  gen->add_option("--n-classes", pairgen.n_classes, "Relation classes (relation-pairs kind)");

  // --- build-graphs ---
  auto* build = app.add_subcommand("build-graphs", "Build relation graphs for a scenes file");
  std::string build_scenes, build_kind, build_out, build_classifier;
  std::size_t build_k_max = kDefaultKMax, build_n_sem = 4;
  build->add_option("--scenes", build_scenes, "Scenes file (.jsonl)")->required();
  build->add_option("--kind", build_kind, "spatial | semantic")
      ->required()
      ->check(CLI::IsMember({"spatial", "semantic", "spa", "sem"}));
  build->add_option("--out", build_out, "Output path (.jsonl, one graph per scene)")->required();
  build->add_option("--classifier", build_classifier,
                    "Relation classifier checkpoint (semantic kind without precomputed edges)");
  build->add_option("--k-max", build_k_max, "Maximum regions per scene");
  build->add_option("--n-sem", build_n_sem, "Semantic label classes");

  // --- train ---
  auto* train = app.add_subcommand("train", "Train one branch, or the relation classifier");
  std::string train_scenes, train_graph_kind = "spa", train_config_path, train_out;
  std::string train_vocab_out, train_curve_out, train_classifier, train_pairs;
  train->add_option("--scenes", train_scenes, "Scenes file (.jsonl)");
  train->add_option("--graph-kind", train_graph_kind, "sem | spa")
      ->check(CLI::IsMember({"sem", "spa", "semantic", "spatial"}));
  train->add_option("--config", train_config_path, "Training config (.json)");
  train->add_option("--out", train_out, "Checkpoint output path")->required();
  train->add_option("--vocab-out", train_vocab_out, "Vocabulary output path");
  train->add_option("--curve-out", train_curve_out, "Loss curve output path (.csv)");
  train->add_option("--classifier", train_classifier,
                    "Relation classifier checkpoint for semantic graphs");
  train->add_option("--relation-pairs", train_pairs,
                    "Labeled pair file: train the relation classifier instead of a branch");

  // --- caption ---
  auto* caption = app.add_subcommand("caption", "Generate captions for a scenes file");
  std::string cap_scenes, cap_mode = "fused", cap_sem, cap_spa, cap_vocab, cap_out;
  std::string cap_attention_out, cap_classifier;
  GenConfig cap_config;
  std::size_t cap_n_sem = 4, cap_k_max = kDefaultKMax;
  caption->add_option("--scenes", cap_scenes, "Scenes file (.jsonl)")->required();
  caption->add_option("--mode", cap_mode, "sem | spa | fused")
      ->check(CLI::IsMember({"sem", "spa", "fused", "semantic", "spatial"}));
  caption->add_option("--ckpt-sem", cap_sem, "Semantic branch checkpoint");
  caption->add_option("--ckpt-spa", cap_spa, "Spatial branch checkpoint");
  caption->add_option("--vocab", cap_vocab, "Vocabulary file")->required();
  caption->add_option("--alpha", cap_config.alpha, "Fusion weight of the semantic branch");
  caption->add_option("--beam", cap_config.beam, "Beam width");
  caption->add_option("--max-len", cap_config.max_len, "Maximum caption length");
  caption->add_option("--out", cap_out, "Captions output path (.jsonl)")->required();
  caption->add_option("--attention-out", cap_attention_out, "Attention dump path (.jsonl)");
  caption->add_option("--classifier", cap_classifier, "Relation classifier checkpoint");
  caption->add_option("--n-sem", cap_n_sem, "Semantic label classes");
  caption->add_option("--k-max", cap_k_max, "Maximum regions per scene");
  caption->add_flag("!--gcn-no-reverse", cap_config.gcn_reverse,
                    "Drop reverse-direction graph contributions");

  // --- evaluate ---
  auto* evaluate = app.add_subcommand("evaluate", "Caption scenes and score BLEU@1..4");
  std::string eval_scenes, eval_mode = "fused", eval_sem, eval_spa, eval_vocab, eval_out;
  std::string eval_classifier;
  GenConfig eval_config;
  std::size_t eval_n_sem = 4, eval_k_max = kDefaultKMax;
  evaluate->add_option("--scenes", eval_scenes, "Scenes file (.jsonl)")->required();
  evaluate->add_option("--mode", eval_mode, "sem | spa | fused")
      ->check(CLI::IsMember({"sem", "spa", "fused", "semantic", "spatial"}));
  evaluate->add_option("--ckpt-sem", eval_sem, "Semantic branch checkpoint");
  evaluate->add_option("--ckpt-spa", eval_spa, "Spatial branch checkpoint");
  evaluate->add_option("--vocab", eval_vocab, "Vocabulary file")->required();
  evaluate->add_option("--alpha", eval_config.alpha, "Fusion weight of the semantic branch");
  evaluate->add_option("--beam", eval_config.beam, "Beam width");
  evaluate->add_option("--max-len", eval_config.max_len, "Maximum caption length");
  evaluate->add_option("--out", eval_out, "Report output path (.json)");
  evaluate->add_option("--classifier", eval_classifier, "Relation classifier checkpoint");
  evaluate->add_option("--n-sem", eval_n_sem, "Semantic label classes");
  evaluate->add_option("--k-max", eval_k_max, "Maximum regions per scene");

  // --- alpha-sweep ---
  auto* sweep = app.add_subcommand("alpha-sweep", "Fused BLEU@4 across an alpha grid");
  std::string sweep_scenes, sweep_sem, sweep_spa, sweep_vocab, sweep_out, sweep_classifier;
  std::vector<double> sweep_alphas;
  std::size_t sweep_grid = 11, sweep_n_sem = 4, sweep_k_max = kDefaultKMax;
  GenConfig sweep_config;
  sweep->add_option("--scenes", sweep_scenes, "Scenes file (.jsonl)")->required();
  sweep->add_option("--ckpt-sem", sweep_sem, "Semantic branch checkpoint")->required();
  sweep->add_option("--ckpt-spa", sweep_spa, "Spatial branch checkpoint")->required();
  sweep->add_option("--vocab", sweep_vocab, "Vocabulary file")->required();
  sweep->add_option("--alphas", sweep_alphas, "Explicit alpha grid")->delimiter(',');
  sweep->add_option("--grid", sweep_grid, "Evenly spaced grid size over [0,1]");
  sweep->add_option("--beam", sweep_config.beam, "Beam width");
  sweep->add_option("--max-len", sweep_config.max_len, "Maximum caption length");
  sweep->add_option("--out", sweep_out, "CSV output path");
  sweep->add_option("--classifier", sweep_classifier, "Relation classifier checkpoint");
  sweep->add_option("--n-sem", sweep_n_sem, "Semantic label classes");
  sweep->add_option("--k-max", sweep_k_max, "Maximum regions per scene");

  // --- gradcheck ---
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "Finite-difference check of the full model on random small instances");
  std::size_t gc_instances = 5;
  double gc_tol = 1e-4, gc_step = 1e-5;
  gradcheck->add_option("--instances", gc_instances, "Number of random instances");
  gradcheck->add_option("--tol", gc_tol, "Maximum relative discrepancy");
  gradcheck->add_option("--step", gc_step, "Finite-difference step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }

  if (*gen) {
    std::uint64_t s = seed.value_or(1);
    if (gen_kind == "scenes") {
      synth.seed = s;
      write_file(gen_out, scenes_to_jsonl(generate_synthetic_corpus(synth)));
    } else {
      pairgen.seed = s;
      pairgen.d_v = synth.d_v;
      pairgen.n_categories = synth.n_categories;
      pairgen.noise = synth.noise;
      write_file(gen_out, labeled_pairs_to_jsonl(generate_relation_pairs(pairgen)));
    }
    return 0;
  }

  if (*build) {
    GraphKind kind = graph_kind_from_name(build_kind);
    std::vector<Scene> scenes = load_scenes(build_scenes, build_k_max);
    std::optional<ParamStore> classifier = maybe_load(build_classifier);
    std::ostringstream out;
    for (const Scene& scene : scenes) {
      RelationGraph graph =
          scene_graph(scene, kind, build_n_sem, classifier ? &*classifier : nullptr);
      json line = json::parse(graph.to_json());
      line["image_id"] = scene.image_id;
      out << line.dump() << "\n";
    }
    write_file(build_out, out.str());
    return 0;
  }

  if (*train) {
    if (!train_pairs.empty()) {
      TrainConfig base = config_from_options(train_config_path, seed);
      std::ifstream in(train_pairs, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open \"" + train_pairs + "\"");
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      std::vector<LabeledPair> pairs = labeled_pairs_from_jsonl(text);
      if (pairs.empty()) throw std::runtime_error("no labeled pairs in \"" + train_pairs + "\"");
      std::size_t n_classes = 0;
      for (const LabeledPair& p : pairs) n_classes = std::max(n_classes, p.label);
      RelationTrainConfig config;
      config.lr = base.lr;
      config.seed = base.seed;
      config.iterations = base.iterations;
      ParamStore params;
      RelationTrainResult result = train_relation_classifier(
          pairs, RelationClassifierDims::defaults(pairs[0].subject.shape[0], n_classes), config,
          params);
      for (std::size_t missing : result.missing_classes) {
        std::cerr << json{{"warning", "class " + std::to_string(missing) +
                                          " absent from training data"}}
                         .dump()
                  << "\n";
      }
      save_checkpoint(params, train_out);
      std::cout << json{{"initial_loss", result.initial_loss},
                        {"final_loss", result.final_loss}}
                       .dump()
                << "\n";
      return 0;
    }
    if (train_scenes.empty()) {
      throw std::runtime_error("train: --scenes (or --relation-pairs) is required");
    }
    TrainConfig config = config_from_options(train_config_path, seed);
    std::vector<Scene> scenes = load_scenes(train_scenes, config.k_max);
    std::optional<ParamStore> classifier = maybe_load(train_classifier);
    TrainResult result = train_branch(scenes, graph_kind_from_name(train_graph_kind), config,
                                      classifier ? &*classifier : nullptr);
    save_checkpoint(result.params, train_out);
    if (!train_vocab_out.empty()) result.vocab.save(train_vocab_out);
    if (!train_curve_out.empty()) write_file(train_curve_out, loss_curve_csv(result.loss_curve));
    std::cout << json{{"final_corpus_nll", result.final_corpus_nll},
                      {"vocab_size", result.vocab.size()}}
                     .dump()
              << "\n";
    return 0;
  }

  if (*caption || *evaluate) {
    bool eval_mode_run = static_cast<bool>(*evaluate);
    const std::string& scenes_path = eval_mode_run ? eval_scenes : cap_scenes;
    const std::string& mode_name = eval_mode_run ? eval_mode : cap_mode;
    const std::string& sem_path = eval_mode_run ? eval_sem : cap_sem;
    const std::string& spa_path = eval_mode_run ? eval_spa : cap_spa;
    const std::string& vocab_path = eval_mode_run ? eval_vocab : cap_vocab;
    const std::string& classifier_path = eval_mode_run ? eval_classifier : cap_classifier;
    GenConfig config = eval_mode_run ? eval_config : cap_config;
    std::size_t n_sem = eval_mode_run ? eval_n_sem : cap_n_sem;
    std::size_t k_max = eval_mode_run ? eval_k_max : cap_k_max;

    config.mode = fusion_mode_from_name(mode_name);
    std::vector<Scene> scenes = load_scenes(scenes_path, k_max);
    Vocabulary vocab = Vocabulary::load(vocab_path);
    std::optional<ParamStore> sem = maybe_load(sem_path);
    std::optional<ParamStore> spa = maybe_load(spa_path);
    const ParamStore* sem_ptr = sem ? &*sem : nullptr;
    const ParamStore* spa_ptr = spa ? &*spa : nullptr;
    std::optional<ParamStore> classifier = maybe_load(classifier_path);
    const ParamStore* cls_ptr = classifier ? &*classifier : nullptr;

    if (eval_mode_run) {
      EvalReport report =
          evaluate_scenes(scenes, sem_ptr, spa_ptr, vocab, config, n_sem, cls_ptr);
      report.seed = seed.value_or(0);
      std::string text = report.to_json();
      if (!eval_out.empty()) write_file(eval_out, text + "\n");
      std::cout << text << "\n";
      return 0;
    }

    std::ostringstream captions_out;
    std::ostringstream attention_out;
    for (const Scene& scene : scenes) {
      GenResult gen = generate(scene, sem_ptr, spa_ptr, vocab, config, n_sem, cls_ptr);
      json line = json::object();
      line["image_id"] = scene.image_id;
      line["caption"] = gen.caption;
      line["score"] = gen.score;
      line["mode"] = fusion_mode_name(config.mode);
      line["alpha"] = config.alpha;
      captions_out << line.dump() << "\n";
      if (!cap_attention_out.empty()) {
        for (const StepAttention& att : gen.attention) {
          json rec = json::object();
          rec["image_id"] = scene.image_id;
          rec["step"] = att.step;
          rec["branch"] = graph_kind_name(att.branch);
          rec["lambda"] = att.lambda;
          attention_out << rec.dump() << "\n";
        }
      }
    }
    write_file(cap_out, captions_out.str());
    if (!cap_attention_out.empty()) write_file(cap_attention_out, attention_out.str());
    return 0;
  }

  if (*sweep) {
    std::vector<Scene> scenes = load_scenes(sweep_scenes, sweep_k_max);
    Vocabulary vocab = Vocabulary::load(sweep_vocab);
    ParamStore sem = load_checkpoint(sweep_sem);
    ParamStore spa = load_checkpoint(sweep_spa);
    std::optional<ParamStore> classifier = maybe_load(sweep_classifier);
    std::vector<double> alphas = sweep_alphas;
    if (alphas.empty()) {
      if (sweep_grid < 2) throw std::runtime_error("alpha-sweep: grid must have >= 2 points");
      for (std::size_t i = 0; i < sweep_grid; ++i) {
        alphas.push_back(static_cast<double>(i) / static_cast<double>(sweep_grid - 1));
      }
    }
    auto rows = alpha_sweep(scenes, sem, spa, vocab, alphas, sweep_config, sweep_n_sem,
                            classifier ? &*classifier : nullptr);
    std::string csv = alpha_sweep_csv(rows);
    if (!sweep_out.empty()) write_file(sweep_out, csv);
    std::cout << csv;
    return 0;
  }

  if (*gradcheck) {
    GradSuiteResult result = full_model_grad_suite(gc_instances, gc_tol, seed.value_or(1),
                                                   gc_step);
    for (const auto& inst : result.instances) {
      std::cout << (inst.pass ? "PASS" : "FAIL") << " kind=" << graph_kind_name(inst.kind)
                << " seed=" << inst.seed << " max_rel=" << inst.worst << "\n";
    }
    std::cout << (result.pass ? "PASS" : "FAIL") << " overall (tol=" << result.tol << ")\n";
    return result.pass ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
