#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace relcap {

// Word <-> index bijection with reserved tokens at the front. Tokenized data
// can never produce the reserved spellings (angle brackets are stripped).
class Vocabulary {
 public:
  static constexpr std::size_t kBos = 0;
  static constexpr std::size_t kEos = 1;
  static constexpr std::size_t kUnk = 2;
  static constexpr std::size_t kReserved = 3;

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t index) const;
  // Unknown words map to kUnk.
  std::size_t index(const std::string& word) const;
  bool contains(const std::string& word) const { return by_word_.count(word) > 0; }

  const std::vector<std::string>& words() const { return words_; }

  std::vector<std::size_t> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(const std::vector<std::size_t>& indices) const;

  std::string to_json() const;
  static Vocabulary from_json(const std::string& text);
  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::string> words_;
  std::map<std::string, std::size_t> by_word_;
};

// Lowercases, strips punctuation, splits on whitespace.
std::vector<std::string> tokenize(const std::string& text);

// Content words with count >= min_count, ordered by frequency descending then
// lexicographic, behind the reserved tokens. Throws if nothing survives.
Vocabulary build_vocab(const std::vector<std::string>& corpus, std::size_t min_count);

}  // namespace relcap
