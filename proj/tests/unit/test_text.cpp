#include <doctest.h>

#include <algorithm>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

using namespace worldgen;

TEST_CASE("tokenize lowercases and splits on punctuation") {
  CHECK(tokenize("Wizard's Reagent-Room, 2nd floor!") ==
        std::vector<std::string>{"wizard", "s", "reagent", "room", "2nd", "floor"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ...  ").empty());
}

TEST_CASE("tokenize keeps UTF-8 words together") {
  CHECK(tokenize("Caf\xC3\xA9 du Nord") == std::vector<std::string>{"caf\xC3\xA9", "du", "nord"});
}

TEST_CASE("fold_name normalizes case and whitespace") {
  CHECK(fold_name("  Town   of\tAnoria ") == "town of anoria");
  CHECK(fold_name("EMPTY CLOSET") == fold_name("empty closet"));
  CHECK(fold_name("") == "");
}

TEST_CASE("trim, split_words and join") {
  CHECK(trim("\n  a b \t") == "a b");
  CHECK(split_words(" Hello,  world. ") == std::vector<std::string>{"Hello,", "world."});
  CHECK(join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(join({}, ",") == "");
  CHECK(to_lower("MiXeD 42") == "mixed 42");
}

TEST_CASE("Stream is reproducible and in range") {
  Stream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Stream s(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(s.below(7) < 7);
  }
}

TEST_CASE("sample_indices draws distinct indices") {
  Stream s(3);
  auto idx = s.sample_indices(10, 6);
  REQUIRE(idx.size() == 6);
  std::sort(idx.begin(), idx.end());
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  CHECK(idx.back() < 10);
  CHECK(s.sample_indices(3, 10).size() == 3);
}

TEST_CASE("truncated_geometric respects its cap") {
  Stream s(9);
  for (int i = 0; i < 200; ++i) {
    const int n = s.truncated_geometric(0.1, 4);
    CHECK(n >= 0);
    CHECK(n <= 4);
  }
  CHECK(s.truncated_geometric(1.0, 10) == 0);
}

TEST_CASE("derive_seed separates keys") {
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 1) != derive_seed(2, 1));
  CHECK(derive_seed(5, 5) == derive_seed(5, 5));
  CHECK(fnv1a("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a("a") == 0xAF63DC4C8601EC8CULL);
}
