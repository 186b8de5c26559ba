#include "relcap/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace relcap {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.size() < kReserved || words_[kBos] != "<bos>" || words_[kEos] != "<eos>" ||
      words_[kUnk] != "<unk>") {
    throw std::invalid_argument("vocab: expected reserved tokens <bos>, <eos>, <unk> first");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!by_word_.emplace(words_[i], i).second) {
      throw std::invalid_argument("vocab: duplicate word \"" + words_[i] + "\"");
    }
  }
}

const std::string& Vocabulary::word(std::size_t index) const {
  if (index >= words_.size()) {
    throw std::out_of_range("vocab: index " + std::to_string(index) + " out of range (|V|=" +
                            std::to_string(words_.size()) + ")");
  }
  return words_[index];
}

std::size_t Vocabulary::index(const std::string& word) const {
  auto it = by_word_.find(word);
  return it == by_word_.end() ? kUnk : it->second;
}

std::vector<std::size_t> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(index(t));
  return out;
}

std::vector<std::string> Vocabulary::decode(const std::vector<std::size_t>& indices) const {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(word(i));
  return out;
}

std::string Vocabulary::to_json() const { return nlohmann::json(words_).dump(); }

Vocabulary Vocabulary::from_json(const std::string& text) {
  return Vocabulary(nlohmann::json::parse(text).get<std::vector<std::string>>());
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("vocab: cannot open \"" + path + "\"");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("vocab: cannot open \"" + path + "\" for writing");
  out << to_json() << "\n";
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else if (std::isalnum(c) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
    // punctuation is stripped
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

Vocabulary build_vocab(const std::vector<std::string>& corpus, std::size_t min_count) {
  if (corpus.empty()) throw std::invalid_argument("vocab: empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const std::string& line : corpus) {
    for (const std::string& tok : tokenize(line)) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [word, count] : counts) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw std::invalid_argument("vocab: no word reaches min_count=" + std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> words{"<bos>", "<eos>", "<unk>"};
  for (const auto& [word, count] : kept) words.push_back(word);
  return Vocabulary(std::move(words));
}

}  // namespace relcap
