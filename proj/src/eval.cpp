#include "relcap/eval.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "relcap/bleu.hpp"

namespace relcap {

using nlohmann::json;

std::string EvalReport::to_json() const {
  json doc = json::object();
  doc["bleu1"] = bleu[0];
  doc["bleu2"] = bleu[1];
  doc["bleu3"] = bleu[2];
  doc["bleu4"] = bleu[3];
  json records_json = json::array();
  for (const EvalRecord& r : records) {
    json rec = json::object();
    rec["image_id"] = r.image_id;
    rec["caption"] = r.caption;
    rec["score"] = r.score;
    records_json.push_back(std::move(rec));
  }
  doc["records"] = std::move(records_json);
  doc["mode"] = mode;
  doc["alpha"] = alpha;
  doc["beam"] = beam;
  doc["seed"] = seed;
  return doc.dump();
}

EvalReport evaluate_scenes(const std::vector<Scene>& scenes, const ParamStore* sem_params,
                           const ParamStore* spa_params, const Vocabulary& vocab,
                           const GenConfig& config, std::size_t n_sem,
                           const ParamStore* relation_classifier) {
  EvalReport report;
  report.mode = fusion_mode_name(config.mode);
  report.alpha = config.alpha;
  report.beam = config.beam;
  std::vector<TokenSeq> candidates;
  std::vector<std::vector<TokenSeq>> references;
  for (const Scene& scene : scenes) {
    GenResult gen = generate(scene, sem_params, spa_params, vocab, config, n_sem,
                             relation_classifier);
    report.records.push_back({scene.image_id, gen.caption, gen.score});
    candidates.push_back(tokenize(gen.caption));
    std::vector<TokenSeq> refs;
    for (const std::string& caption : scene.captions) refs.push_back(tokenize(caption));
    references.push_back(std::move(refs));
  }
  BleuStats stats = bleu_stats(candidates, references);
  for (int n = 1; n <= 4; ++n) report.bleu[n - 1] = bleu_from_stats(stats, n);
  return report;
}

std::vector<std::pair<double, double>> alpha_sweep(
    const std::vector<Scene>& scenes, const ParamStore& sem_params, const ParamStore& spa_params,
    const Vocabulary& vocab, const std::vector<double>& alphas, const GenConfig& base_config,
    std::size_t n_sem, const ParamStore* relation_classifier) {
  std::vector<std::pair<double, double>> rows;
  for (double alpha : alphas) {
    GenConfig config = base_config;
    config.mode = FusionMode::fused;
    config.alpha = alpha;
    EvalReport report = evaluate_scenes(scenes, &sem_params, &spa_params, vocab, config, n_sem,
                                        relation_classifier);
    rows.emplace_back(alpha, report.bleu[3]);
  }
  return rows;
}

std::string alpha_sweep_csv(const std::vector<std::pair<double, double>>& rows) {
  std::ostringstream out;
  out << "alpha,bleu4\n";
  char buf[32];
  for (const auto& [alpha, bleu4] : rows) {
    auto [e1, ec1] = std::to_chars(buf, buf + sizeof(buf), alpha);
    out << std::string_view(buf, e1 - buf) << ",";
    auto [e2, ec2] = std::to_chars(buf, buf + sizeof(buf), bleu4);
    out << std::string_view(buf, e2 - buf) << "\n";
  }
  return out.str();
}

}  // namespace relcap
