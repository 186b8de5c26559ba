#pragma once

#include <array>
#include <string>
#include <vector>

namespace relcap {

using TokenSeq = std::vector<std::string>;

struct BleuStats {
  std::array<long long, 4> matched{};  // clipped n-gram matches, n = 1..4
  std::array<long long, 4> total{};    // candidate n-gram counts
  long long candidate_length = 0;
  long long reference_length = 0;  // closest reference lengths, ties to shorter
};

// Corpus BLEU@N: modified n-gram precision with clipping, geometric mean over
// n = 1..N, multiplied by the brevity penalty. Counts are integers, so the
// score is independent of candidate and reference ordering. An empty
// candidate simply contributes nothing.
double corpus_bleu(const std::vector<TokenSeq>& candidates,
                   const std::vector<std::vector<TokenSeq>>& references, int max_n);

BleuStats bleu_stats(const std::vector<TokenSeq>& candidates,
                     const std::vector<std::vector<TokenSeq>>& references);

double bleu_from_stats(const BleuStats& stats, int max_n);

}  // namespace relcap
