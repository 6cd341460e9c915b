// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "oracles/coverage_oracle.hpp"
#include "oracles/tfidf_oracle.hpp"
#include "support.hpp"
#include "worldgen/affordance.hpp"
#include "worldgen/assembly.hpp"
#include "worldgen/embedding.hpp"
#include "worldgen/evaluation.hpp"
#include "worldgen/generator.hpp"
#include "worldgen/planted.hpp"
#include "worldgen/service.hpp"

using namespace worldgen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

double median3(std::array<double, 3> v) {
  std::sort(v.begin(), v.end());
  return v[1];
}

// ---------------------------------------------------------------------------
// Planted-corpus learning runs, shared by criteria 3, 4 and 7.

constexpr std::size_t kPlantedK = 20;

struct PlantedRun {
  double embedding = 0, ir = 0, random = 0, train_seconds = 0;
  std::shared_ptr<const EmbeddingModel> model;
};

struct PlantedResults {
  std::map<std::pair<std::uint64_t, FeatureMode>, PlantedRun> runs;
};

const PlantedResults& planted_results() {
  static const PlantedResults results = [] {
    PlantedResults r;
    for (std::uint64_t seed : {1, 2, 3}) {
      PlantedCorpusSpec spec;
      spec.seed = seed;
      const Corpus corpus = make_planted_corpus(spec);
      const IRScorer ir(Vocabulary::fit(corpus_documents(corpus)));
      const RandomScorer random(seed);
      for (FeatureMode mode : {FeatureMode::name_only, FeatureMode::name_and_description}) {
        auto ex = derive_examples(corpus, Task::location, mode);
        EmbeddingScorerParams params;
        params.seed = seed;
        const auto t0 = Clock::now();
        const auto trained = train_embedding_scorer(
            ex.at(Split::train), {{Task::location, candidate_pool(ex, true)}}, params, mode);
        PlantedRun run;
        run.train_seconds = seconds_since(t0);
        run.model = trained.model;
        const EmbeddingScorer emb(trained.model);
        const auto pool = candidate_pool(ex, false);
        EvalConfig cfg;
        cfg.num_candidates = kPlantedK;
        cfg.seed = seed;
        cfg.feature_mode = mode;
        const auto& test = ex.at(Split::test);
        run.embedding = hits_at_1(emb, test, pool, cfg).hits_at_1;
        run.ir = hits_at_1(ir, test, pool, cfg).hits_at_1;
        run.random = hits_at_1(random, test, pool, cfg).hits_at_1;
        r.runs[{seed, mode}] = run;
      }
    }
    return r;
  }();
  return results;
}

// ---------------------------------------------------------------------------

Outcome ir_oracle_equivalence() {
  std::ifstream in(WORLDGEN_SAMPLE_CORPUS);
  const oracle::TfIdf ref(nlohmann::json::parse(in));
  const Corpus& corpus = testing::sample_corpus();
  const IRScorer ir(Vocabulary::fit(corpus_documents(corpus)));
  std::size_t examples = 0, mismatches = 0;
  for (FeatureMode mode : {FeatureMode::name_and_description, FeatureMode::name_only}) {
    for (Task task : kAllTasks) {
      const auto ex = derive_examples(corpus, task, mode);
      const auto pool = candidate_pool(ex, false);
      std::vector<std::string> texts;
      for (const auto& c : pool) texts.push_back(c.text);
      for (Split split : kAllSplits) {
        for (const auto& e : ex.at(split)) {
          ScorerInput input{e.context_text, pool, task, 0};
          ++examples;
          if (rank(ir, input) != ref.rank(e.context_text, texts)) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0 && examples >= 2 * 200,
          std::to_string(examples) + " rankings (both feature modes), " + std::to_string(mismatches) +
              " mismatches"};
}

Outcome random_calibration() {
  std::vector<PlacementExample> ex;
  std::vector<Candidate> pool;
  for (std::size_t j = 0; j < 300; ++j) pool.push_back({"c" + std::to_string(j), "c" + std::to_string(j)});
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto& gold = pool[(i * 7) % pool.size()];
    ex.push_back({Task::location, "context " + std::to_string(i), gold.name, gold.text, ""});
  }
  EvalConfig cfg;
  cfg.num_candidates = 12;
  cfg.seed = 8;
  const double h = hits_at_1(RandomScorer(31), ex, pool, cfg).hits_at_1;
  const double p = 1.0 / 12.0;
  const double sigma = 100.0 * std::sqrt(p * (1 - p) / 1000.0);
  return {std::abs(h - 100 * p) <= 3 * sigma,
          "Hits@1 " + fmt(h) + " vs 8.33 +/- " + fmt(3 * sigma) + " (3 sigma)"};
}

Outcome learning_signal() {
  const auto& run = planted_results().runs.at({1, FeatureMode::name_and_description});
  const double random_ref = std::max(run.random, 100.0 / kPlantedK);
  const bool pass = run.embedding >= 3 * random_ref && run.embedding >= run.ir &&
                    run.train_seconds < 120.0;
  return {pass, "embedding " + fmt(run.embedding) + ", IR " + fmt(run.ir) + ", random " +
                    fmt(run.random) + " (reference " + fmt(random_ref) + "), K=20, training " +
                    fmt(run.train_seconds, 1) + " s single-threaded"};
}

Outcome ablation_direction() {
  const auto& runs = planted_results().runs;
  std::array<double, 3> ir_margin{}, emb_margin{};
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto& both = runs.at({seed, FeatureMode::name_and_description});
    const auto& name = runs.at({seed, FeatureMode::name_only});
    ir_margin[seed - 1] = both.ir - name.ir;
    emb_margin[seed - 1] = both.embedding - name.embedding;
  }
  const double ir = median3(ir_margin), emb = median3(emb_margin);
  return {ir >= 0 && emb >= 0, "median margin (name+description minus name) IR " + fmt(ir) +
                                   ", embedding " + fmt(emb) + " over seeds 1-3"};
}

Outcome world_invariants() {
  const Corpus corpus = make_planted_corpus({});
  auto ir = std::make_shared<IRScorer>(Vocabulary::fit(corpus_documents(corpus)));
  ir->prepare(scoring_texts(corpus, FeatureMode::name_and_description));
  GenerationConfig cfg;
  cfg.max_locations = 50;
  cfg.filler_prob = 0.15;
  cfg.blocked_fraction = 0.1;
  cfg.seed = 1000;
  const auto t0 = Clock::now();
  const auto worlds = create_worlds(corpus, ScorerSet::uniform(ir), cfg, 1000);
  std::size_t failures = 0, fillers = 0, placements = 0;
  for (const auto& w : worlds) {
    if (!validate_world(w, &corpus).empty()) ++failures;
    for (auto i : w.grid.filled_cells()) {
      if (i == w.grid.center()) continue;
      ++placements;
      fillers += w.grid.cell(i).content->is_filler;
    }
  }
  const double secs = seconds_since(t0);
  const double f = static_cast<double>(fillers) / static_cast<double>(placements);
  const double band = 3 * std::sqrt(0.15 * 0.85 / static_cast<double>(placements));
  return {failures == 0 && std::abs(f - 0.15) <= band && secs < 60.0,
          std::to_string(worlds.size()) + " worlds, " + std::to_string(failures) +
              " invalid, filler fraction " + fmt(f, 4) + " (band 0.15 +/- " + fmt(band, 4) + "), " +
              fmt(secs, 1) + " s"};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WORLDGEN_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome determinism() {
  testing::TempDir dir;
  const std::string corpus = std::string("--corpus ") + WORLDGEN_SAMPLE_CORPUS;
  std::array<std::string, 2> outs;
  for (int r = 0; r < 2; ++r) {
    const fs::path p = dir.path() / ("run" + std::to_string(r));
    if (run_cli(corpus + " --seed 17 --out " + (p / "worlds").string() + " build --count 5") != 0 ||
        run_cli(corpus + " --seed 17 --out " + (p / "model").string() + " train") != 0) {
      return {false, "CLI run failed"};
    }
  }
  std::size_t files = 0, differ = 0;
  for (const auto& e : fs::directory_iterator(dir.path() / "run0" / "worlds")) {
    ++files;
    const fs::path twin = dir.path() / "run1" / "worlds" / e.path().filename();
    if (testing::read_file(e.path()) != testing::read_file(twin)) ++differ;
  }
  const std::string m0 = testing::read_file(dir.path() / "run0" / "model" / "model.bin");
  const std::string m1 = testing::read_file(dir.path() / "run1" / "model" / "model.bin");
  const bool models_same = !m0.empty() && m0 == m1;
  return {files == 5 && differ == 0 && models_same,
          std::to_string(files) + " world files, " + std::to_string(differ) + " differ; model " +
              std::to_string(m0.size()) + " bytes, " + (models_same ? "identical" : "different")};
}

Outcome coverage_sanity() {
  const Corpus corpus = make_planted_corpus({});
  const std::size_t n = corpus.regular_locations().size();
  GenerationConfig cfg;
  cfg.seed = 5000;
  const auto worlds =
      create_worlds(corpus, ScorerSet::uniform(std::make_shared<RandomScorer>(77)), cfg, 500);
  const auto report = diversity_report(worlds);
  std::vector<std::size_t> sizes;
  for (const auto& w : worlds) {
    std::set<std::string> ids;
    for (auto i : w.grid.filled_cells()) {
      const auto& p = *w.grid.cell(i).content;
      if (!p.is_filler) ids.insert(p.location_id);
    }
    sizes.push_back(ids.size());
  }
  const auto mc = oracle::coverage_monte_carlo(n, sizes, 10, 12345);
  const auto sigma = oracle::coverage_sigma(n, sizes);
  double worst = 0.0;
  std::size_t outside = 0;
  for (std::size_t m = 0; m < sizes.size(); ++m) {
    const double diff = std::abs(static_cast<double>(report.location_coverage[m]) - mc[m]);
    const double limit = 3 * sigma[m] * std::sqrt(1.1);
    if (diff > limit) ++outside;
    if (sigma[m] > 0) worst = std::max(worst, diff / (sigma[m] * std::sqrt(1.1)));
  }

  // Trained scorer: the seed-1 location model drives placement.
  const auto& run = planted_results().runs.at({1, FeatureMode::name_and_description});
  auto emb = std::make_shared<EmbeddingScorer>(run.model);
  emb->prepare(scoring_texts(corpus, FeatureMode::name_and_description));
  ScorerSet trained = ScorerSet::uniform(std::make_shared<RandomScorer>(78));
  trained.location = emb;
  const auto tw = create_worlds(corpus, trained, cfg, 500);
  const auto tr = diversity_report(tw);
  const bool monotone = std::is_sorted(tr.location_coverage.begin(), tr.location_coverage.end());
  const bool bounded = tr.location_coverage.back() <= n;
  return {outside == 0 && monotone && bounded,
          "random: " + std::to_string(outside) + " of 500 points outside 3 sigma (max " + fmt(worst) +
              " sigma), final " + std::to_string(report.location_coverage.back()) + "/" +
              std::to_string(n) + "; trained: " + (monotone ? "monotone" : "NOT monotone") +
              ", final " + std::to_string(tr.location_coverage.back()) + "/" + std::to_string(n)};
}

Outcome metric_fixtures() {
  const std::vector<std::string> self = {"the tall tower looms over the quiet town"};
  const std::vector<std::string> novel = {"bright copper engines hum softly"};
  const bool f1 = f1_overlap("a b c", "a b c") == 1.0 && f1_overlap("a b", "c d") == 0.0 &&
                  f1_overlap("a b b", "a b c") == 2.0 / 3.0;
  const bool ng = ngram_novelty(self, self, 3) == 1.0 && ngram_novelty(novel, self, 3) == 0.0;
  return {f1 && ng, std::string("f1_overlap fixtures ") + (f1 ? "ok" : "wrong") +
                        ", ngram_novelty fixtures " + (ng ? "ok" : "wrong")};
}

Outcome affordance_fixture() {
  const Corpus& corpus = testing::sample_corpus();
  const auto ex = affordance_examples(corpus);
  const auto model = train_affordance_model(ex);
  const ObjectCard* sword = corpus.find_object("wooden sword");
  const auto pred = predict_affordances(model, sword->name, sword->description);
  const bool fixture =
      pred.labels.contains(Affordance::gettable) && pred.labels.contains(Affordance::wieldable);
  std::vector<AffordanceSet> p, g, maj;
  const AffordanceSet m = majority_labels(ex);
  for (const auto& e : ex) {
    p.push_back(predict_affordances(model, e.name, e.description).labels);
    g.push_back(e.labels);
    maj.push_back(m);
  }
  const double f1 = micro_score(p, g).f1(), base = micro_score(maj, g).f1();
  std::string labels;
  for (const auto& l : pred.labels.names()) labels += (labels.empty() ? "" : ",") + l;
  return {fixture && f1 > base, "wooden sword -> {" + labels + "}; train micro-F1 " + fmt(f1, 3) +
                                    " vs majority " + fmt(base, 3)};
}

Outcome service_contract() {
  auto corpus = std::make_shared<const Corpus>(testing::sample_corpus());
  auto ir = std::make_shared<IRScorer>(Vocabulary::fit(corpus_documents(*corpus)));
  ir->prepare(scoring_texts(*corpus, FeatureMode::name_and_description));
  const ScorerSet scorers = ScorerSet::uniform(ir);
  auto gen = std::make_shared<const MarkovGenerator>(*corpus);
  testing::TempDir dir;
  ServiceConfig cfg;
  cfg.data_dir = dir.path();
  const FeatureMode mode = cfg.feature_mode;

  std::size_t trials = 0, mismatches = 0;
  bool duplicate_rejected = true;
  std::size_t duplicate_attempts = 0;
  std::map<std::string, SessionState> before;
  {
    WorldService svc(corpus, scorers, gen, cfg);
    Stream rng(2024);
    const auto regular = corpus->regular_locations();
    while (trials < 100) {
      const json s = svc.create_session({{"width", 4}, {"height", 4}, {"seed", rng.next() >> 1}});
      const std::string id = s.at("id");
      // Grow a few random locations outward from the center.
      const std::size_t extra = rng.below(6);
      for (std::size_t k = 0; k < extra; ++k) {
        const SessionState st = svc.state(id);
        std::vector<std::size_t> open;
        for (auto c : st.grid.filled_cells()) {
          for (auto nb : st.grid.neighbors(c)) {
            if (st.grid.cell(nb).state == CellState::empty) open.push_back(nb);
          }
        }
        std::set<std::string> placed;
        for (auto c : st.grid.filled_cells()) placed.insert(st.grid.cell(c).content->location_id);
        const LocationCard* pick = regular[rng.below(regular.size())];
        if (open.empty() || placed.count(pick->id)) continue;
        svc.place(id, {{"cell", open[rng.below(open.size())]}, {"name", pick->name}});
      }
      const SessionState st = svc.state(id);

      // Independently assembled scorer input for a random target.
      ScorerInput in;
      std::size_t cell = 0;
      SuggestKind kind = SuggestKind::location;
      std::vector<std::size_t> empty_adjacent;
      for (std::size_t c = 0; c < st.grid.size(); ++c) {
        if (st.grid.cell(c).state != CellState::empty) continue;
        for (auto nb : st.grid.neighbors(c)) {
          if (st.grid.cell(nb).state == CellState::filled) {
            empty_adjacent.push_back(c);
            break;
          }
        }
      }
      const auto choice = rng.below(3);
      auto text_of = [&](std::size_t c) {
        const LocationCard* l = corpus->location_by_id(st.grid.cell(c).content->location_id);
        return encode_text(l->name, l->description, mode);
      };
      if (choice == 0 && !empty_adjacent.empty()) {
        kind = SuggestKind::location;
        cell = empty_adjacent[rng.below(empty_adjacent.size())];
        std::vector<std::string> parts;
        for (std::size_t nb = 0; nb < st.grid.size(); ++nb) {
          if (st.grid.adjacent(cell, nb) && st.grid.cell(nb).state == CellState::filled) {
            parts.push_back(text_of(nb));
          }
        }
        in.context_text = join(parts, " ");
        in.task = Task::location;
        std::set<std::string> placed;
        for (auto c : st.grid.filled_cells()) placed.insert(st.grid.cell(c).content->location_id);
        for (const auto& l : corpus->locations()) {
          if (!l.is_filler && !placed.count(l.id)) {
            in.candidates.push_back({l.name, encode_text(l.name, l.description, mode)});
          }
        }
      } else {
        const auto filled = st.grid.filled_cells();
        cell = filled[rng.below(filled.size())];
        in.context_text = text_of(cell);
        if (choice == 1) {
          kind = SuggestKind::character;
          in.task = Task::character;
          for (const auto& c : corpus->characters()) {
            in.candidates.push_back({c.name, encode_text(c.name, c.description, mode)});
          }
        } else {
          kind = SuggestKind::object;
          in.task = Task::object;
          for (const auto& o : corpus->objects()) {
            in.candidates.push_back({o.name, encode_text(o.name, o.description, mode)});
          }
        }
      }
      const auto expected = rank(*ir, in);
      const auto got = svc.suggest(id, cell, kind, {}, in.candidates.size());
      bool same = got.size() == expected.size();
      for (std::size_t r = 0; same && r < got.size(); ++r) {
        same = got[r].name == in.candidates[expected[r]].name;
      }
      if (!same) ++mismatches;
      ++trials;

      // Placing an already placed regular location must be refused.
      if (trials % 10 == 0 && !empty_adjacent.empty()) {
        const std::string center_name =
            corpus->location_by_id(st.grid.cell(st.grid.center()).content->location_id)->name;
        ++duplicate_attempts;
        try {
          svc.place(id, {{"cell", empty_adjacent.front()}, {"name", center_name}});
          duplicate_rejected = false;
        } catch (const ServiceError& e) {
          duplicate_rejected = duplicate_rejected && e.status() == 409 && e.code() == "duplicate_location";
        }
        duplicate_rejected = duplicate_rejected && svc.state(id) == st;
      }
    }
    for (const auto& id : svc.session_ids()) before[id] = svc.state(id);
  }

  WorldService restarted(corpus, scorers, gen, cfg);
  std::size_t restored = 0;
  for (const auto& [id, st] : before) restored += restarted.state(id) == st;
  const bool replay = restored == before.size() && restarted.session_ids().size() == before.size();
  duplicate_rejected = duplicate_rejected && duplicate_attempts > 0;
  return {mismatches == 0 && duplicate_rejected && replay,
          std::to_string(trials) + " trials, " + std::to_string(mismatches) +
              " ordering mismatches; duplicate placement " +
              (duplicate_rejected ? "rejected" : "NOT rejected") + " in " +
              std::to_string(duplicate_attempts) + " attempts; " + std::to_string(restored) + "/" +
              std::to_string(before.size()) + " sessions identical after restart"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"IR oracle equivalence", ir_oracle_equivalence},
      {"random baseline calibration", random_calibration},
      {"learning signal", learning_signal},
      {"feature ablation direction", ablation_direction},
      {"world invariant suite", world_invariants},
      {"determinism", determinism},
      {"coverage sanity", coverage_sanity},
      {"metric fixtures", metric_fixtures},
      {"affordance fixture", affordance_fixture},
      {"service contract", service_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << o.detail << " (" << fmt(seconds_since(t0), 1) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
