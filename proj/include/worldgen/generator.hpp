#pragma once

// Content for elements that are not in the corpus.
//
// ElementGenerator is the pluggable interface. MarkovGenerator is the shipped
// implementation: it retrieves the three most similar same-kind cards by
// TF-IDF over names, fits an order-2 word chain on their text fields and walks
// it with a seeded stream. Object affordances come from the linear classifier.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "worldgen/affordance.hpp"
#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"

namespace worldgen {

enum class ElementKind { location, character, object };
std::string_view to_string(ElementKind k);
/// Throws std::invalid_argument for anything but location/character/object.
ElementKind parse_element_kind(std::string_view s);

struct GeneratedElement {
  ElementKind kind = ElementKind::location;
  std::string name;
  // location: description + background; character: persona + description;
  // object: description + affordances.
  std::string description;
  std::string background;
  std::string persona;
  std::vector<std::string> affordances;
  std::string generator;
  std::uint64_t seed = 0;
  /// Names of the retrieved cards the text was drawn from.
  std::vector<std::string> sources;

  std::string id() const;
  LocationCard to_location_card() const;
  CharacterCard to_character_card() const;
  ObjectCard to_object_card() const;
};

/// The ordinary card JSON of the element's kind plus "generated": true and a
/// "provenance" block.
nlohmann::json to_json(const GeneratedElement& e);
GeneratedElement generated_element_from_json(const nlohmann::json& j);

class ElementGenerator {
 public:
  virtual ~ElementGenerator() = default;
  virtual std::string name() const = 0;
  /// Throws std::invalid_argument for an empty name or a kind the generator
  /// has no source cards for.
  virtual GeneratedElement generate(const std::string& name, ElementKind kind,
                                    std::uint64_t seed) const = 0;
};

inline constexpr std::size_t kMaxGeneratedTokens = 60;

class MarkovGenerator final : public ElementGenerator {
 public:
  /// Trains the affordance classifier on the corpus objects when none is given.
  explicit MarkovGenerator(const Corpus& corpus,
                           std::shared_ptr<const AffordanceModel> affordances = nullptr);

  std::string name() const override { return "retrieval-markov"; }
  GeneratedElement generate(const std::string& name, ElementKind kind,
                            std::uint64_t seed) const override;

  /// Indices (into the corpus list of that kind) of the k cards whose names
  /// are most similar to the query, best first, ties by index.
  std::vector<std::size_t> retrieve(const std::string& name, ElementKind kind, std::size_t k) const;

 private:
  struct Source {
    std::string name;
    std::string first;   // description, or persona for characters
    std::string second;  // background, or description for characters
    std::string object_description;
  };
  const std::vector<Source>& sources(ElementKind kind) const;

  std::vector<Source> locations_, characters_, objects_;
  IRScorer ir_;
  std::shared_ptr<const AffordanceModel> affordances_;
};

/// Generates from an order-2 word chain fitted on the texts. Occurrences of
/// each text's own subject name are replaced by the new name; if the first
/// sentence of the walk does not mention the new name it is prefixed to it.
/// Output is capped at max_tokens words and is never empty.
std::string markov_text(const std::vector<std::pair<std::string, std::string>>& subject_and_text,
                        const std::string& name, std::uint64_t seed,
                        std::size_t max_tokens = kMaxGeneratedTokens);

}  // namespace worldgen
