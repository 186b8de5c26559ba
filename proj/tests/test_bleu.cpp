#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "relcap/bleu.hpp"
#include "relcap/vocab.hpp"

using namespace relcap;

namespace {

// Brute-force n-gram scorer: vector-keyed maps, no shared code with the
// library implementation.
double oracle_bleu(const std::vector<TokenSeq>& cands,
                   const std::vector<std::vector<TokenSeq>>& refs, int max_n) {
  long long cand_len = 0, ref_len = 0;
  std::vector<long long> match(max_n, 0), total(max_n, 0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    cand_len += static_cast<long long>(cands[i].size());
    long long best_ref = static_cast<long long>(refs[i][0].size());
    for (const TokenSeq& r : refs[i]) {
      long long len = static_cast<long long>(r.size());
      long long cur = std::llabs(best_ref - static_cast<long long>(cands[i].size()));
      long long alt = std::llabs(len - static_cast<long long>(cands[i].size()));
      if (alt < cur || (alt == cur && len < best_ref)) best_ref = len;
    }
    ref_len += best_ref;
    for (int n = 1; n <= max_n; ++n) {
      std::map<std::vector<std::string>, long long> cand_grams;
      for (std::size_t p = 0; p + n <= cands[i].size(); ++p) {
        cand_grams[std::vector<std::string>(cands[i].begin() + p, cands[i].begin() + p + n)]++;
      }
      std::map<std::vector<std::string>, long long> ref_grams;
      for (const TokenSeq& r : refs[i]) {
        std::map<std::vector<std::string>, long long> one;
        for (std::size_t p = 0; p + n <= r.size(); ++p) {
          one[std::vector<std::string>(r.begin() + p, r.begin() + p + n)]++;
        }
        for (const auto& [g, c] : one) ref_grams[g] = std::max(ref_grams[g], c);
      }
      for (const auto& [g, c] : cand_grams) {
        total[n - 1] += c;
        auto it = ref_grams.find(g);
        if (it != ref_grams.end()) match[n - 1] += std::min(c, it->second);
      }
    }
  }
  double logp = 0.0;
  for (int n = 0; n < max_n; ++n) {
    if (match[n] == 0) return 0.0;
    logp += std::log(static_cast<double>(match[n]) / static_cast<double>(total[n]));
  }
  double bp = 1.0;
  if (cand_len == 0) return 0.0;
  if (cand_len < ref_len) {
    bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  }
  return bp * std::exp(logp / max_n);
}

std::vector<std::vector<TokenSeq>> wrap_refs(const std::vector<TokenSeq>& refs) {
  std::vector<std::vector<TokenSeq>> out;
  for (const TokenSeq& r : refs) out.push_back({r});
  return out;
}

}  // namespace

TEST_SUITE("bleu") {

TEST_CASE("exact matches score one at every order") {
  std::vector<TokenSeq> cands{tokenize("a dog sits on the mat"),
                              tokenize("two birds over the lake")};
  auto refs = wrap_refs(cands);
  for (int n = 1; n <= 4; ++n) CHECK(corpus_bleu(cands, refs, n) == 1.0);
}

TEST_CASE("disjoint vocabulary scores zero at unigrams") {
  std::vector<TokenSeq> cands{tokenize("x y z")};
  std::vector<std::vector<TokenSeq>> refs{{tokenize("a b c"), tokenize("d e f")}};
  CHECK(corpus_bleu(cands, refs, 1) == 0.0);
}

TEST_CASE("empty candidates are scored, not rejected") {
  std::vector<TokenSeq> cands{{}, tokenize("a b")};
  std::vector<std::vector<TokenSeq>> refs{{tokenize("a b")}, {tokenize("a b")}};
  CHECK_NOTHROW(corpus_bleu(cands, refs, 1));
  CHECK(corpus_bleu(cands, refs, 1) > 0.0);
}

TEST_CASE("a twenty-sentence corpus agrees with the brute-force oracle") {
  std::vector<std::string> sentences{
      "a dog inside a car",          "a cat sector3 a tree",
      "the man cover the chair",     "a boat overlap a boat",
      "two birds sector7 the lamp",  "a woman sector1 a table",
      "the ball under the table",    "a horse sector2 a sheep",
      "the bus sector5 a bike",      "a tree cover a ball",
      "a dog sector4 a cat",         "the chair inside the house",
      "a lamp overlap the table",    "the sheep sector6 a tree",
      "a bike sector8 the boat",     "the car cover a dog",
      "a table and a chair",         "the bird sector2 the man",
      "a woman overlap the mat",     "a cat inside the box"};
  std::vector<TokenSeq> cands;
  std::vector<std::vector<TokenSeq>> refs;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    cands.push_back(tokenize(sentences[i]));
    // first reference: a shifted sentence; second: the sentence itself when
    // i is even, so precision varies across the corpus
    std::vector<TokenSeq> r{tokenize(sentences[(i + 1) % sentences.size()])};
    if (i % 2 == 0) r.push_back(tokenize(sentences[i]));
    refs.push_back(std::move(r));
  }
  for (int n = 1; n <= 4; ++n) {
    double mine = corpus_bleu(cands, refs, n);
    double ref = oracle_bleu(cands, refs, n);
    CHECK(std::fabs(mine - ref) <= 1e-12);
  }
}

TEST_CASE("score ignores reference and corpus ordering") {
  std::vector<TokenSeq> cands{tokenize("a b c d"), tokenize("c d e"), tokenize("a a a")};
  std::vector<std::vector<TokenSeq>> refs{
      {tokenize("a b c"), tokenize("b c d e")},
      {tokenize("c d e f"), tokenize("c d")},
      {tokenize("a a"), tokenize("a a a a")}};
  double base = corpus_bleu(cands, refs, 4);

  auto refs_shuffled = refs;
  for (auto& r : refs_shuffled) std::reverse(r.begin(), r.end());
  CHECK(corpus_bleu(cands, refs_shuffled, 4) == base);

  std::vector<TokenSeq> cands_rev(cands.rbegin(), cands.rend());
  std::vector<std::vector<TokenSeq>> refs_rev(refs.rbegin(), refs.rend());
  CHECK(corpus_bleu(cands_rev, refs_rev, 4) == base);
}

TEST_CASE("brevity penalty punishes short candidates") {
  std::vector<TokenSeq> cands{tokenize("a b")};
  std::vector<std::vector<TokenSeq>> refs{{tokenize("a b c d")}};
  double expected = std::exp(1.0 - 4.0 / 2.0);  // precisions are 1, bp = e^{-1}
  CHECK(corpus_bleu(cands, refs, 1) == doctest::Approx(expected).epsilon(1e-12));
}

}  // TEST_SUITE
