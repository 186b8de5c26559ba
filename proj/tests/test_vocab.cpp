#include <doctest.h>

#include "relcap/vocab.hpp"

using namespace relcap;

TEST_SUITE("vocab") {

TEST_CASE("tokenize lowercases and strips punctuation") {
  auto tokens = tokenize("A Dog, sits  on the MAT!");
  CHECK(tokens == std::vector<std::string>{"a", "dog", "sits", "on", "the", "mat"});
  CHECK(tokenize("<bos> x") == std::vector<std::string>{"bos", "x"});
  CHECK(tokenize("sector_3 stays") == std::vector<std::string>{"sector_3", "stays"});
}

TEST_CASE("min_count filters rare words") {
  Vocabulary v = build_vocab({"a b", "a c"}, 2);
  CHECK(v.size() == Vocabulary::kReserved + 1);
  CHECK(v.contains("a"));
  CHECK_FALSE(v.contains("b"));
}

TEST_CASE("min_count of one keeps every distinct token") {
  Vocabulary v = build_vocab({"a b", "a c"}, 1);
  CHECK(v.size() == Vocabulary::kReserved + 3);
  for (const char* w : {"a", "b", "c"}) CHECK(v.contains(w));
}

TEST_CASE("ordering is frequency descending then lexicographic") {
  Vocabulary v = build_vocab({"pear pear apple banana banana cherry"}, 1);
  CHECK(v.word(Vocabulary::kReserved + 0) == "banana");  // 2, before pear lexicographically
  CHECK(v.word(Vocabulary::kReserved + 1) == "pear");    // 2
  CHECK(v.word(Vocabulary::kReserved + 2) == "apple");   // 1
  CHECK(v.word(Vocabulary::kReserved + 3) == "cherry");  // 1
}

TEST_CASE("an unreachable min_count is an error") {
  CHECK_THROWS_AS(build_vocab({"a b c"}, 5), std::invalid_argument);
}

TEST_CASE("reserved tokens come first and unknown words map to unk") {
  Vocabulary v = build_vocab({"only words here"}, 1);
  CHECK(v.word(Vocabulary::kBos) == "<bos>");
  CHECK(v.word(Vocabulary::kEos) == "<eos>");
  CHECK(v.word(Vocabulary::kUnk) == "<unk>");
  CHECK(v.index("missing") == Vocabulary::kUnk);
  CHECK(v.index("only") >= Vocabulary::kReserved);
}

TEST_CASE("json round-trip preserves the index order") {
  Vocabulary v = build_vocab({"x y z y"}, 1);
  Vocabulary back = Vocabulary::from_json(v.to_json());
  CHECK(back.words() == v.words());
}

}  // TEST_SUITE
