#include <doctest.h>

#include <cmath>
#include <fstream>

#include "oracles/tfidf_oracle.hpp"
#include "support.hpp"
#include "worldgen/ranking.hpp"

using namespace worldgen;

namespace {

ScorerInput input_of(std::string context, std::vector<std::string> names, std::uint64_t nonce = 0) {
  ScorerInput in;
  in.context_text = std::move(context);
  for (auto& n : names) in.candidates.push_back({n, n});
  in.nonce = nonce;
  return in;
}

nlohmann::json sample_json() {
  std::ifstream in(WORLDGEN_SAMPLE_CORPUS);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("rank_scores orders descending with index tie-break") {
  const std::vector<double> s = {0.5, 0.9, 0.5, 0.1, 0.9};
  CHECK(rank_scores(s) == std::vector<std::size_t>{1, 4, 0, 2, 3});
  CHECK(rank_scores(std::vector<double>{}).empty());
  const std::vector<double> flat(4, 0.0);
  CHECK(rank_scores(flat) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("scorers reject empty candidate lists") {
  const ScorerInput empty;
  CHECK_THROWS_AS(RandomScorer(1).score(empty), std::invalid_argument);
  CHECK_THROWS_AS(IRScorer(Vocabulary{}).score(empty), std::invalid_argument);
  CHECK_THROWS_AS(ProportionalScorer({}).score(empty), std::invalid_argument);
}

TEST_CASE("random scorer is keyed by seed and nonce") {
  const RandomScorer r(5);
  const auto in = input_of("ctx", {"a", "b", "c", "d"}, 17);
  CHECK(r.score(in) == r.score(in));
  auto other = in;
  other.nonce = 18;
  CHECK(r.score(in) != r.score(other));
  CHECK(RandomScorer(6).score(in) != r.score(in));
  for (double v : r.score(in)) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("proportional scorer counts training golds per task") {
  std::vector<PlacementExample> train = {
      {Task::location, "x", "Dock", "Dock", "l1"},
      {Task::location, "y", "Dock", "Dock", "l2"},
      {Task::location, "z", "Hall", "Hall", "l3"},
      {Task::object, "z", "Hall", "Hall", "l3"},
  };
  const ProportionalScorer p(train);
  CHECK(p.frequency(Task::location, "Dock") == 2);
  CHECK(p.frequency(Task::object, "Dock") == 0);
  auto in = input_of("anything", {"Hall", "Dock", "Attic"});
  CHECK(p.score(in) == std::vector<double>{1, 2, 0});
  CHECK(rank(p, in) == std::vector<std::size_t>{1, 0, 2});
}

TEST_CASE("IR idf and cosine on a two-document collection") {
  const std::vector<std::string> docs = {"a b", "a c"};
  const IRScorer ir(Vocabulary::fit(docs));
  CHECK(ir.idf("a") == doctest::Approx(1.0));
  CHECK(ir.idf("b") == doctest::Approx(std::log(1.5) + 1.0));
  CHECK(ir.idf("zzz") == doctest::Approx(std::log(3.0) + 1.0));
  CHECK(ir.cosine("a b", "b a") == doctest::Approx(1.0));
  const double wb = std::log(1.5) + 1.0;
  CHECK(ir.cosine("a", "a b") == doctest::Approx(1.0 / std::sqrt(1.0 + wb * wb)));
  CHECK(ir.cosine("b", "c") == 0.0);
  CHECK(ir.cosine("", "a") == 0.0);
}

TEST_CASE("IR term frequency is the raw count") {
  const std::vector<std::string> docs = {"a b", "c"};
  const IRScorer ir(Vocabulary::fit(docs));
  const double wa = ir.idf("a"), wb = ir.idf("b");
  const double expected = (2 * wa * wa) / (std::sqrt(4 * wa * wa) * std::sqrt(wa * wa + wb * wb));
  CHECK(ir.cosine("a a", "a b") == doctest::Approx(expected));
}

TEST_CASE("vocabulary records document frequency once per document") {
  const std::vector<std::string> docs = {"a a b", "b c", "b"};
  const auto v = Vocabulary::fit(docs);
  CHECK(v.document_count() == 3);
  CHECK(v.size() == 3);
  CHECK(v.document_frequency("a") == 1);
  CHECK(v.document_frequency("b") == 3);
  CHECK(v.document_frequency("nope") == 0);
  CHECK(v.index("c") == 2);
  CHECK(v.index("nope") == -1);
  CHECK(Vocabulary::from_parts(v.tokens(), v.frequencies(), v.document_count()) == v);
}

TEST_CASE("IR on the sample corpus agrees with the oracle fixture") {
  const Corpus& c = testing::sample_corpus();
  IRScorer ir(Vocabulary::fit(corpus_documents(c)));
  const oracle::TfIdf ref(sample_json());
  const std::vector<std::string> names = {"wizard's reagent room", "fishing dock"};
  const auto in = input_of("wizard tower", names);
  CHECK(rank(ir, in) == std::vector<std::size_t>{0, 1});
  CHECK(ref.rank("wizard tower", names) == std::vector<std::size_t>{0, 1});
  const auto scores = ir.score(in);
  CHECK(scores[0] == doctest::Approx(static_cast<double>(ref.cosine("wizard tower", names[0]))));
  CHECK(scores[1] == doctest::Approx(static_cast<double>(ref.cosine("wizard tower", names[1]))));
}

TEST_CASE("IR prepare caches without changing scores") {
  const Corpus& c = testing::sample_corpus();
  IRScorer cold(Vocabulary::fit(corpus_documents(c)));
  IRScorer warm(Vocabulary::fit(corpus_documents(c)));
  const std::vector<std::string> texts = {"Town of Anoria", "Fishing Dock", "candle"};
  warm.prepare(texts);
  const auto in = input_of("Town of Anoria", {"Fishing Dock", "candle", "Town Square"});
  CHECK(cold.score(in) == warm.score(in));
}

TEST_CASE("candidate_pool keeps first-seen distinct golds") {
  std::vector<PlacementExample> ex = {
      {Task::location, "c", "Dock", "Dock . wet", "1"},
      {Task::location, "c", "dock", "dock . other", "2"},
      {Task::location, "c", "Hall", "Hall . big", "3"},
  };
  const auto pool = candidate_pool(ex);
  REQUIRE(pool.size() == 2);
  CHECK(pool[0] == Candidate{"Dock", "Dock . wet"});
  CHECK(pool[1].name == "Hall");
}

TEST_CASE("corpus_documents covers every card") {
  const Corpus& c = testing::sample_corpus();
  CHECK(corpus_documents(c).size() ==
        c.locations().size() + c.characters().size() + c.objects().size());
}
