#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"
#include "worldgen/text.hpp"

namespace testing {

inline const worldgen::Corpus& sample_corpus() {
  static const worldgen::Corpus c = worldgen::load_corpus(WORLDGEN_SAMPLE_CORPUS);
  return c;
}

/// Ranks candidates by a fixed preference list (earlier names score higher);
/// everything else scores 0.
class OracleScorer final : public worldgen::Scorer {
 public:
  explicit OracleScorer(std::vector<std::string> preferred) {
    for (std::size_t i = 0; i < preferred.size(); ++i) {
      weight_[worldgen::fold_name(preferred[i])] = static_cast<double>(preferred.size() - i);
    }
  }
  std::string name() const override { return "oracle"; }
  std::vector<double> score(const worldgen::ScorerInput& in) const override {
    std::vector<double> out;
    for (const auto& c : in.candidates) {
      auto it = weight_.find(worldgen::fold_name(c.name));
      out.push_back(it == weight_.end() ? 0.0 : it->second);
    }
    return out;
  }

 private:
  std::unordered_map<std::string, double> weight_;
};

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("worldgen-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace testing
