// worldgen: train, evaluate, build, analyze and serve.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <CLI11.hpp>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "worldgen/assembly.hpp"
#include "worldgen/corpus.hpp"
#include "worldgen/embedding.hpp"
#include "worldgen/evaluation.hpp"
#include "worldgen/generator.hpp"
#include "worldgen/scorers.hpp"
#include "worldgen/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace worldgen;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string corpus;
  std::uint64_t seed = 0;
  std::string out = ".";
};

Corpus require_corpus(const Globals& g) {
  if (g.corpus.empty()) throw UsageError("--corpus is required");
  if (!fs::exists(g.corpus)) throw UsageError("corpus file not found: " + g.corpus);
  return load_corpus(g.corpus);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("could not write " + path.string());
}

std::vector<Task> parse_tasks(const std::vector<std::string>& names) {
  std::vector<Task> out;
  for (const auto& n : names) {
    if (n == "all") return {kAllTasks.begin(), kAllTasks.end()};
    out.push_back(parse_task(n));
  }
  return out;
}

std::vector<FeatureMode> parse_features(const std::string& s) {
  if (s == "both") return {FeatureMode::name_only, FeatureMode::name_and_description};
  return {parse_feature_mode(s)};
}

std::vector<PlacementExample> of_task(std::span<const PlacementExample> all, Task t) {
  std::vector<PlacementExample> out;
  for (const auto& e : all) {
    if (e.task == t) out.push_back(e);
  }
  return out;
}

std::string format_pct(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::vector<std::string> tasks = {"all"};
  std::string feature = "name_and_description";
  EmbeddingScorerParams params;
  std::string model_name = "model.bin";
};

int cmd_train(const Globals& g, TrainOptions o) {
  const Corpus corpus = require_corpus(g);
  const auto tasks = parse_tasks(o.tasks);
  const FeatureMode mode = parse_feature_mode(o.feature);
  o.params.seed = g.seed;
  o.params.validate();

  const auto examples = train_examples(corpus, mode, tasks);
  if (examples.empty()) throw std::runtime_error("no training examples for the selected tasks");
  CandidatePools pools;
  for (Task t : tasks) {
    auto ex = of_task(examples, t);
    if (!ex.empty()) pools[t] = candidate_pool(ex);
  }

  const auto result = train_embedding_scorer(examples, pools, o.params, mode);
  const fs::path out(g.out);
  fs::create_directories(out);
  save_model(*result.model, out / o.model_name);

  std::ostringstream trace;
  trace << "epoch,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
    trace << i + 1 << ',' << std::setprecision(17) << result.loss_trace[i] << '\n';
  }
  write_file(out / "loss_trace.csv", trace.str());

  EmbeddingScorer scorer(result.model);
  std::cout << "trained " << examples.size() << " examples, " << result.loss_trace.size()
            << " epochs, final loss " << result.model->metadata().final_loss << '\n';
  for (const auto& [task, pool] : pools) {
    const auto ex = of_task(examples, task);
    EvalConfig cfg;
    cfg.seed = g.seed;
    cfg.feature_mode = mode;
    cfg.num_candidates = std::min<std::size_t>(cfg.num_candidates, pool.size());
    if (cfg.num_candidates < 2) continue;
    const auto report = hits_at_1(scorer, ex, pool, cfg);
    std::cout << "  train hits@1 " << to_string(task) << " (K=" << cfg.num_candidates
              << "): " << format_pct(report.hits_at_1) << '\n';
  }
  std::cout << "model written to " << (out / o.model_name).string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::vector<std::string> scorers = {"random", "proportional", "ir"};
  std::vector<std::string> tasks = {"all"};
  std::string feature = "both";
  std::string split = "test";
  std::size_t candidates = 21;
  std::string distractors = "all";
};

int cmd_eval(const Globals& g, const EvalOptions& o) {
  const Corpus corpus = require_corpus(g);
  const auto tasks = parse_tasks(o.tasks);
  const auto modes = parse_features(o.feature);
  const Split split = parse_split(o.split);
  const DistractorSource source = parse_distractor_source(o.distractors);
  if (o.candidates < 2) throw UsageError("--candidates must be at least 2");

  const fs::path out(g.out);
  fs::create_directories(out);
  json summary = json::array();
  std::ostringstream table;
  table << "scorer,feature";
  for (Task t : tasks) table << ',' << to_string(t);
  table << '\n';

  for (const auto& spec : o.scorers) {
    for (FeatureMode mode : modes) {
      auto scorer = make_scorer(spec, corpus, mode, g.seed);
      if (auto* emb = dynamic_cast<EmbeddingScorer*>(scorer.get()); emb && spec != "fasttext") {
        const auto& trained = emb->model().metadata().tasks;
        for (Task t : tasks) {
          if (std::find(trained.begin(), trained.end(), t) == trained.end()) {
            throw std::runtime_error("model was not trained on task " + std::string(to_string(t)));
          }
        }
      }
      table << spec << ',' << to_string(mode);
      for (Task t : tasks) {
        const auto ex = derive_examples(corpus, t, mode);
        const auto pool = candidate_pool(ex, source == DistractorSource::task_train_pool);
        const auto& eval_ex = ex.at(split);
        EvalConfig cfg;
        cfg.seed = g.seed;
        cfg.feature_mode = mode;
        cfg.distractor_source = source;
        cfg.num_candidates = std::min(o.candidates, pool.size());
        if (cfg.num_candidates < o.candidates) {
          std::cerr << "note: " << to_string(t) << " pool has " << pool.size()
                    << " candidates; using K=" << cfg.num_candidates << '\n';
        }
        if (eval_ex.empty() || cfg.num_candidates < 2) {
          table << ",n/a";
          continue;
        }
        const auto report = hits_at_1(*scorer, eval_ex, pool, cfg);
        std::string stem = spec;
        std::replace_if(stem.begin(), stem.end(), [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); }, '_');
        stem += "_" + std::string(to_string(t)) + "_" + std::string(to_string(mode));
        write_file(out / (stem + ".json"), to_json(report).dump(2) + "\n");
        write_file(out / (stem + ".csv"), to_csv(report));
        summary.push_back({{"scorer", spec},
                           {"task", to_string(t)},
                           {"feature_mode", to_string(mode)},
                           {"split", to_string(split)},
                           {"num_candidates", cfg.num_candidates},
                           {"examples", eval_ex.size()},
                           {"hits_at_1", report.hits_at_1}});
        table << ',' << format_pct(report.hits_at_1);
      }
      table << '\n';
    }
  }
  write_file(out / "summary.json", summary.dump(2) + "\n");
  write_file(out / "summary.csv", table.str());
  std::cout << table.str();
  return 0;
}

// ---------------------------------------------------------------------------
// build

struct BuildOptions {
  GenerationConfig config;
  std::size_t count = 1;
  std::string scorer = "ir";
  std::string feature = "name_and_description";
  std::optional<double> min_score;
};

int cmd_build(const Globals& g, BuildOptions o) {
  const Corpus corpus = require_corpus(g);
  o.config.seed = g.seed;
  o.config.feature_mode = parse_feature_mode(o.feature);
  o.config.min_score_threshold = o.min_score;
  o.config.validate();
  if (o.count < 1) throw UsageError("--count must be at least 1");

  auto scorer = make_scorer(o.scorer, corpus, o.config.feature_mode, g.seed);
  const auto worlds = create_worlds(corpus, ScorerSet::uniform(scorer), o.config, o.count);
  const fs::path out(g.out);
  fs::create_directories(out);
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    std::ostringstream name;
    name << "world_" << std::setw(5) << std::setfill('0') << i << ".json";
    write_file(out / name.str(), export_world_json(worlds[i]));
    invalid += validate_world(worlds[i], &corpus).errors() > 0;
  }
  std::cout << "wrote " << worlds.size() << " world(s) to " << out.string() << '\n';
  if (invalid) {
    std::cerr << invalid << " world(s) failed validation\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const Globals& g, const std::string& dir) {
  if (dir.empty()) throw UsageError("a worlds directory is required");
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GameWorld> worlds;
  for (const auto& f : files) {
    std::ifstream in(f);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error&) {
      continue;
    }
    if (j.is_object() && j.value("format", "") == "worldgen.world/1") worlds.push_back(world_from_json(j));
  }
  if (worlds.empty()) throw std::runtime_error("no world files in " + dir);

  const auto report = diversity_report(worlds);
  const fs::path out(g.out);
  write_file(out / "diversity.json", to_json(report).dump(2) + "\n");
  write_file(out / "location_frequency.csv", location_frequency_csv(report));
  write_file(out / "coverage.csv", coverage_csv(report));
  write_file(out / "histograms.csv", histograms_csv(report));

  std::vector<std::string> generated;
  for (const auto& w : worlds) {
    for (const auto& e : w.generated_elements) {
      for (const char* key : {"description", "background", "persona"}) {
        if (e.contains(key) && !e.at(key).get<std::string>().empty()) {
          generated.push_back(e.at(key).get<std::string>());
        }
      }
    }
  }
  if (!generated.empty() && !g.corpus.empty()) {
    const Corpus corpus = load_corpus(g.corpus);
    std::vector<std::string> train;
    for (const auto& l : corpus.locations()) train.push_back(l.description);
    for (const auto& c : corpus.characters()) {
      train.push_back(c.persona);
      train.push_back(c.description);
    }
    for (const auto& ob : corpus.objects()) train.push_back(ob.description);
    json novelty = json::object();
    for (std::size_t n = 1; n <= 5; ++n) novelty[std::to_string(n)] = ngram_novelty(generated, train, n);
    write_file(out / "ngram_novelty.json", novelty.dump(2) + "\n");
  }
  std::cout << "analyzed " << worlds.size() << " world(s); distinct locations used: "
            << report.location_coverage.back() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// serve

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  bool no_suggestions = false;
  std::string scorer = "ir";
  std::string feature = "name_and_description";
};

int cmd_serve(const Globals& g, const ServeOptions& o) {
  auto corpus = std::make_shared<const Corpus>(require_corpus(g));
  ServiceConfig cfg;
  cfg.data_dir = o.data_dir;
  cfg.suggestions_enabled = !o.no_suggestions;
  cfg.feature_mode = parse_feature_mode(o.feature);
  auto scorer = make_scorer(o.scorer, *corpus, cfg.feature_mode, g.seed);
  auto generator = std::make_shared<MarkovGenerator>(*corpus);
  WorldService service(corpus, ScorerSet::uniform(scorer), generator, cfg);

  httplib::Server server;
  mount_api(server, service);
  if (!server.bind_to_port(o.host, o.port)) {
    throw std::runtime_error("could not bind " + o.host + ":" + std::to_string(o.port));
  }
  std::signal(SIGTERM, on_signal);
  std::signal(SIGINT, on_signal);
  std::thread watcher([&] {
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  std::cout << "serving on http://" << o.host << ":" << o.port << std::endl;
  server.listen_after_bind();
  g_stop = true;
  watcher.join();
  service.flush();
  std::cout << "shut down cleanly" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worldgen: learned placement and grid world generation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--corpus", g.corpus, "Corpus JSON file");
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train the embedding scorer");
  t->add_option("--task", train.tasks, "Tasks: all, location, character, object, container")
      ->capture_default_str();
  t->add_option("--feature", train.feature, "name_only or name_and_description")->capture_default_str();
  t->add_option("--epochs", train.params.epochs, "Training epochs")->capture_default_str();
  t->add_option("--dim", train.params.dim, "Embedding width")->capture_default_str();
  t->add_option("--lr", train.params.learning_rate, "Learning rate")->capture_default_str();
  t->add_option("--dropout", train.params.input_dropout, "Input dropout")->capture_default_str();
  t->add_option("--margin", train.params.margin, "Hinge margin")->capture_default_str();
  t->add_option("--negatives", train.params.negatives, "Negatives per positive")->capture_default_str();
  t->add_option("--max-norm", train.params.max_norm, "Row norm cap")->capture_default_str();
  t->add_option("--init-scale", train.params.init_scale, "Uniform init range")->capture_default_str();
  t->add_flag("--subword-init", train.params.subword_init, "Initialize rows from character n-grams");
  t->add_option("--model-name", train.model_name, "Model file name inside --out")->capture_default_str();

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "Hits@1 evaluation");
  e->add_option("--scorer", eval.scorers,
                "random, proportional, ir, fasttext or embedding:<model path>")
      ->capture_default_str();
  e->add_option("--task", eval.tasks, "Tasks to evaluate")->capture_default_str();
  e->add_option("--feature", eval.feature, "name_only, name_and_description or both")
      ->capture_default_str();
  e->add_option("--split", eval.split, "train, valid or test")->capture_default_str();
  e->add_option("--candidates", eval.candidates, "Candidates per example (gold included)")
      ->capture_default_str();
  e->add_option("--distractors", eval.distractors, "all or train")->capture_default_str();

  BuildOptions build;
  auto* b = app.add_subcommand("build", "Generate worlds");
  b->add_option("--count", build.count, "Number of worlds")->capture_default_str();
  b->add_option("--width", build.config.grid_width, "Grid width")->capture_default_str();
  b->add_option("--height", build.config.grid_height, "Grid height")->capture_default_str();
  b->add_option("--max-locations", build.config.max_locations, "Maximum locations")->capture_default_str();
  b->add_option("--filler-prob", build.config.filler_prob, "Filler probability")->capture_default_str();
  b->add_option("--blocked", build.config.blocked_fraction, "Blocked cell fraction")->capture_default_str();
  b->add_option("--extra-connect", build.config.extra_connect_prob, "Extra exit probability")
      ->capture_default_str();
  b->add_option("--min-score", build.min_score, "Stop expanding below this score");
  b->add_option("--scorer", build.scorer, "Scorer for every task")->capture_default_str();
  b->add_option("--feature", build.feature, "name_only or name_and_description")->capture_default_str();

  std::string worlds_dir;
  auto* a = app.add_subcommand("analyze", "Diversity analytics over a worlds directory");
  a->add_option("worlds", worlds_dir, "Directory of world JSON files")->required();

  ServeOptions serve;
  auto* s = app.add_subcommand("serve", "Run the HTTP API");
  s->add_option("--host", serve.host, "Bind address")->capture_default_str();
  s->add_option("--port", serve.port, "Port")->capture_default_str();
  s->add_option("--data-dir", serve.data_dir, "Session storage directory (empty: memory only)");
  s->add_flag("--no-suggestions", serve.no_suggestions, "Disable model suggestions");
  s->add_option("--scorer", serve.scorer, "Scorer for every task")->capture_default_str();
  s->add_option("--feature", serve.feature, "name_only or name_and_description")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (t->parsed()) return cmd_train(g, train);
    if (e->parsed()) return cmd_eval(g, eval);
    if (b->parsed()) return cmd_build(g, build);
    if (a->parsed()) return cmd_analyze(g, worlds_dir);
    if (s->parsed()) return cmd_serve(g, serve);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 1;
}
