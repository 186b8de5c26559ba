#include "relcap/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace relcap {

namespace {

// n-grams keyed by their joined tokens; '\x1f' cannot appear in a token.
std::map<std::string, long long> ngram_counts(const TokenSeq& tokens, int n) {
  std::map<std::string, long long> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuStats bleu_stats(const std::vector<TokenSeq>& candidates,
                     const std::vector<std::vector<TokenSeq>>& references) {
  if (candidates.size() != references.size()) {
    throw std::invalid_argument("bleu: " + std::to_string(candidates.size()) +
                                " candidates vs " + std::to_string(references.size()) +
                                " reference sets");
  }
  BleuStats stats;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const TokenSeq& cand = candidates[i];
    const std::vector<TokenSeq>& refs = references[i];
    if (refs.empty()) {
      throw std::invalid_argument("bleu: candidate " + std::to_string(i) + " has no references");
    }
    stats.candidate_length += static_cast<long long>(cand.size());
    long long closest = static_cast<long long>(refs[0].size());
    for (const TokenSeq& r : refs) {
      long long len = static_cast<long long>(r.size());
      long long cur_diff = std::llabs(closest - static_cast<long long>(cand.size()));
      long long new_diff = std::llabs(len - static_cast<long long>(cand.size()));
      if (new_diff < cur_diff || (new_diff == cur_diff && len < closest)) closest = len;
    }
    stats.reference_length += closest;

    for (int n = 1; n <= 4; ++n) {
      auto cand_counts = ngram_counts(cand, n);
      std::map<std::string, long long> max_ref;
      for (const TokenSeq& r : refs) {
        for (const auto& [gram, count] : ngram_counts(r, n)) {
          max_ref[gram] = std::max(max_ref[gram], count);
        }
      }
      for (const auto& [gram, count] : cand_counts) {
        stats.total[n - 1] += count;
        auto it = max_ref.find(gram);
        if (it != max_ref.end()) stats.matched[n - 1] += std::min(count, it->second);
      }
    }
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats, int max_n) {
  if (max_n < 1 || max_n > 4) {
    throw std::invalid_argument("bleu: N must be in 1..4, got " + std::to_string(max_n));
  }
  double log_precision = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    if (stats.matched[n - 1] == 0) return 0.0;
    log_precision += std::log(static_cast<double>(stats.matched[n - 1]) /
                              static_cast<double>(stats.total[n - 1]));
  }
  log_precision /= static_cast<double>(max_n);
  double bp = 1.0;
  if (stats.candidate_length == 0) return 0.0;
  if (stats.candidate_length < stats.reference_length) {
    bp = std::exp(1.0 - static_cast<double>(stats.reference_length) /
                            static_cast<double>(stats.candidate_length));
  }
  return bp * std::exp(log_precision);
}

double corpus_bleu(const std::vector<TokenSeq>& candidates,
                   const std::vector<std::vector<TokenSeq>>& references, int max_n) {
  return bleu_from_stats(bleu_stats(candidates, references), max_n);
}

}  // namespace relcap
