#include <doctest.h>

#include <set>

#include "support.hpp"
#include "worldgen/corpus.hpp"
#include "worldgen/planted.hpp"

using namespace worldgen;
using testing::sample_corpus;

// Card and example counts below come from tools/count_sample_corpus.py, which
// reads the JSON directly without the library.

TEST_CASE("sample corpus card counts") {
  const Corpus& c = sample_corpus();
  CHECK(c.regular_locations().size() == 40);
  CHECK(c.filler_locations().size() == 25);
  CHECK(c.locations().size() == 65);
  CHECK(c.characters().size() == 60);
  CHECK(c.objects().size() == 80);
}

TEST_CASE("sample corpus validates clean") {
  const auto report = validate(sample_corpus());
  for (const auto& i : report.issues) INFO(i.card_id << " " << i.code << " " << i.message);
  CHECK(report.empty());
}

TEST_CASE("sample corpus example counts per task and split") {
  const Corpus& c = sample_corpus();
  const std::map<Task, std::array<std::size_t, 3>> expected = {
      {Task::location, {75, 8, 10}},
      {Task::character, {59, 6, 6}},
      {Task::object, {74, 10, 10}},
      {Task::container, {16, 1, 1}},
  };
  std::size_t total = 0;
  for (const auto& [task, counts] : expected) {
    const auto ex = derive_examples(c, task, FeatureMode::name_only);
    CAPTURE(to_string(task));
    CHECK(ex.at(Split::train).size() == counts[0]);
    CHECK(ex.at(Split::valid).size() == counts[1]);
    CHECK(ex.at(Split::test).size() == counts[2]);
    for (const auto& [split, list] : ex) {
      total += list.size();
      for (const auto& e : list) CHECK(e.task == task);
    }
  }
  CHECK(total == 276);
}

TEST_CASE("container examples sum the contained lists per split") {
  const Corpus& c = sample_corpus();
  const auto ex = derive_examples(c, Task::container, FeatureMode::name_only);
  for (auto split : kAllSplits) {
    std::size_t n = 0;
    for (const auto& id : c.splits().at(Task::container).at(split)) {
      n += c.object_by_id(id)->contained_examples.size();
    }
    CHECK(ex.at(split).size() == n);
  }
}

TEST_CASE("location examples pair a card with each listed neighbor") {
  const Corpus& c = sample_corpus();
  const LocationCard* town = c.find_location("Town of Anoria");
  REQUIRE(town != nullptr);
  std::vector<std::string> golds;
  const auto examples = derive_examples(c, Task::location, FeatureMode::name_only);
  for (auto split : kAllSplits) {
    for (const auto& e : examples.at(split)) {
      if (e.source_id == town->id) golds.push_back(e.gold);
    }
  }
  CHECK(golds == town->neighbors);
}

TEST_CASE("encode_text per feature mode") {
  CHECK(encode_text("Dock", "Wet planks.", FeatureMode::name_only) == "Dock");
  CHECK(encode_text("Dock", "Wet planks.", FeatureMode::name_and_description) ==
        "Dock . Wet planks.");
}

TEST_CASE("fixture cards from the sample corpus") {
  const Corpus& c = sample_corpus();
  const LocationCard* town = c.find_location("town of anoria");
  REQUIRE(town);
  CHECK(std::find(town->neighbors.begin(), town->neighbors.end(), "Mountain's Peak") !=
        town->neighbors.end());
  CHECK(town->characters == std::vector<std::string>{"townspeople", "mysterious merchant"});
  CHECK(town->objects == std::vector<std::string>{"candle", "backpack"});
  const ObjectCard* pouch = c.find_object("pouch");
  REQUIRE(pouch);
  CHECK(pouch->is_container());
  CHECK(pouch->contained_examples == std::vector<std::string>{"coins", "eyeglasses"});
  const ObjectCard* sword = c.find_object("wooden sword");
  REQUIRE(sword);
  CHECK(sword->affordance_set().contains(Affordance::gettable));
  CHECK(sword->affordance_set().contains(Affordance::wieldable));
  CHECK(c.find_location("EMPTY CLOSET")->is_filler);
}

TEST_CASE("json round trip preserves the corpus") {
  const Corpus& c = sample_corpus();
  CHECK(corpus_from_json(to_json(c)) == c);
  testing::TempDir dir;
  save_corpus(c, dir.path() / "c.json");
  CHECK(load_corpus(dir.path() / "c.json") == c);
  CHECK(corpus_hash(load_corpus(dir.path() / "c.json")) == corpus_hash(c));
}

TEST_CASE("loader errors are typed") {
  testing::TempDir dir;
  CHECK_THROWS_AS(load_corpus(dir.path() / "missing.json"), UnreadableFile);
  testing::write_file(dir.path() / "bad.json", "{\"locations\": [");
  CHECK_THROWS_AS(load_corpus(dir.path() / "bad.json"), MalformedJson);
  CHECK_THROWS_AS(corpus_from_json(nlohmann::json::array()), MalformedJson);
  CHECK_THROWS_AS(corpus_from_json({{"locations", {{{"name", "no id"}}}}}), MalformedJson);
  CHECK_THROWS_AS(corpus_from_json({{"locations", "nope"}}), MalformedJson);
  const nlohmann::json dup = {{"locations",
                               {{{"id", "a"}, {"name", "One"}}, {{"id", "a"}, {"name", "Two"}}}}};
  CHECK_THROWS_AS(corpus_from_json(dup), DuplicateId);
}

TEST_CASE("validation reports each problem") {
  LocationCard a{.id = "a", .name = "Hall"};
  a.neighbors = {"Nowhere", "hall two", "Hall Two"};
  LocationCard b{.id = "b", .name = "Hall Two"};
  LocationCard f{.id = "f", .name = "Closet", .is_filler = true};
  f.characters = {"guard"};
  CharacterCard guard{.id = "g", .name = ""};
  ObjectCard box{.id = "o1", .name = "box"};
  box.affordances = {"gettable", "gettable", "flying"};
  box.contained_examples = {"box"};
  box.size_tag = "huge";
  ObjectCard box2{.id = "o2", .name = "Box"};
  Splits splits;
  splits[Task::location][Split::train] = {"a", "zzz"};
  splits[Task::location][Split::test] = {"a"};
  const Corpus c({a, b, f}, {guard}, {box, box2}, splits);
  const auto r = validate(c);
  CHECK(r.count("dangling_reference") >= 1);
  CHECK(r.count("duplicate_entry") == 1);
  CHECK(r.count("filler_content") == 1);
  CHECK(r.count("empty_name") == 1);
  CHECK(r.count("duplicate_affordance") == 1);
  CHECK(r.count("unknown_affordance") == 1);
  CHECK(r.count("contents_without_container") == 1);
  CHECK(r.count("invalid_size_tag") == 1);
  CHECK(r.count("name_collision") == 1);
  CHECK(r.count("unknown_split_id") == 1);
  CHECK(r.count("split_overlap") == 1);
  CHECK(r.errors() == r.issues.size() - r.count("name_collision"));
}

TEST_CASE("allocate_counts uses largest remainders") {
  CHECK(allocate_counts(40, {}) == std::array<std::size_t, 3>{32, 4, 4});
  CHECK(allocate_counts(12, {}) == std::array<std::size_t, 3>{10, 1, 1});
  CHECK(allocate_counts(7, {}) == std::array<std::size_t, 3>{5, 1, 1});
  CHECK(allocate_counts(0, {}) == std::array<std::size_t, 3>{0, 0, 0});
}

TEST_CASE("make_splits partitions each task's elements") {
  const Corpus& c = sample_corpus();
  const Corpus fresh = make_splits(c.with_splits({}), {}, 11);
  for (auto task : kAllTasks) {
    std::set<std::string> seen;
    std::size_t n = 0;
    for (const auto& [split, ids] : fresh.splits().at(task)) {
      for (const auto& id : ids) seen.insert(id);
      n += ids.size();
    }
    CHECK(n == seen.size());
    const auto elements = split_elements(c, task);
    CHECK(seen == std::set<std::string>(elements.begin(), elements.end()));
  }
  CHECK(make_splits(c.with_splits({}), {}, 11) == fresh);
  CHECK(make_splits(fresh, {}, 99) == fresh);
  CHECK(make_splits(fresh, {}, 99, true) != fresh);
  CHECK_THROWS_AS(make_splits(c, {0.5, 0.5, 0.5}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_splits(c, {1.0, 0.0, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("derive_examples needs splits") {
  const Corpus bare = sample_corpus().with_splits({});
  CHECK_THROWS_AS(derive_examples(bare, Task::location, FeatureMode::name_only),
                  std::invalid_argument);
}

TEST_CASE("parsers reject unknown names") {
  CHECK(parse_task("container") == Task::container);
  CHECK_THROWS_AS(parse_task("planet"), std::invalid_argument);
  CHECK(parse_feature_mode("name_only") == FeatureMode::name_only);
  CHECK_THROWS_AS(parse_split("dev"), std::invalid_argument);
  CHECK(parse_affordance("wieldable") == Affordance::wieldable);
  CHECK_FALSE(parse_affordance("weapon").has_value());
}

TEST_CASE("planted corpus shape") {
  PlantedCorpusSpec spec;
  const Corpus c = make_planted_corpus(spec);
  CHECK(c.regular_locations().size() == 200);
  CHECK(c.filler_locations().size() == filler_library().size());
  CHECK(validate(c).errors() == 0);
  // Neighbors stay within the cluster block.
  const auto regular = c.regular_locations();
  for (std::size_t i = 0; i < regular.size(); ++i) {
    for (const auto& n : regular[i]->neighbors) {
      const auto* l = c.find_location(n);
      REQUIRE(l);
      const auto j = static_cast<std::size_t>(
          std::find(regular.begin(), regular.end(), l) - regular.begin());
      CHECK(j / spec.locations_per_cluster == i / spec.locations_per_cluster);
    }
  }
  CHECK(make_planted_corpus(spec) == c);
}
