#include "worldgen/generator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::location: return "location";
    case ElementKind::character: return "character";
    case ElementKind::object: return "object";
  }
  return "location";
}

ElementKind parse_element_kind(std::string_view s) {
  if (s == "location") return ElementKind::location;
  if (s == "character") return ElementKind::character;
  if (s == "object") return ElementKind::object;
  throw std::invalid_argument("unknown element kind: " + std::string(s));
}

std::string GeneratedElement::id() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(fold_name(name), fnv1a(to_string(kind)))));
  return "gen-" + std::string(to_string(kind)) + "-" + buf;
}

LocationCard GeneratedElement::to_location_card() const {
  LocationCard c;
  c.id = id();
  c.name = name;
  c.description = description;
  c.background = background;
  c.category = "other";
  c.generated = true;
  return c;
}

CharacterCard GeneratedElement::to_character_card() const {
  CharacterCard c;
  c.id = id();
  c.name = name;
  c.persona = persona;
  c.description = description;
  c.generated = true;
  return c;
}

ObjectCard GeneratedElement::to_object_card() const {
  ObjectCard c;
  c.id = id();
  c.name = name;
  c.description = description;
  c.affordances = affordances;
  c.generated = true;
  return c;
}

nlohmann::json to_json(const GeneratedElement& e) {
  nlohmann::json j;
  switch (e.kind) {
    case ElementKind::location: j = to_json(e.to_location_card()); break;
    case ElementKind::character: j = to_json(e.to_character_card()); break;
    case ElementKind::object: j = to_json(e.to_object_card()); break;
  }
  j["kind"] = to_string(e.kind);
  j["generated"] = true;
  j["provenance"] = {{"generator", e.generator}, {"seed", e.seed}, {"sources", e.sources}};
  return j;
}

GeneratedElement generated_element_from_json(const nlohmann::json& j) {
  GeneratedElement e;
  e.kind = parse_element_kind(j.at("kind").get<std::string>());
  e.name = j.at("name").get<std::string>();
  e.description = j.value("description", "");
  e.background = j.value("background", "");
  e.persona = j.value("persona", "");
  e.affordances = j.value("affordances", std::vector<std::string>{});
  const auto& p = j.at("provenance");
  e.generator = p.at("generator").get<std::string>();
  e.seed = p.at("seed").get<std::uint64_t>();
  e.sources = p.value("sources", std::vector<std::string>{});
  return e;
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kBos = "\x02";
constexpr const char* kEos = "\x03";
constexpr const char* kSubject = "\x01";

// Replaces case-insensitive occurrences of subject in text with the marker,
// padded by spaces so it splits into its own word.
std::string mark_subject(const std::string& text, const std::string& subject) {
  const std::string needle = to_lower(trim(subject));
  if (needle.empty()) return text;
  const std::string hay = to_lower(text);
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t hit = hay.find(needle, pos);
    if (hit == std::string::npos) break;
    out.append(text, pos, hit - pos);
    out += ' ';
    out += kSubject;
    out += ' ';
    pos = hit + needle.size();
  }
  out.append(text, pos, std::string::npos);
  return out;
}

bool ends_sentence(const std::string& w) {
  return !w.empty() && (w.back() == '.' || w.back() == '!' || w.back() == '?');
}

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::string markov_text(const std::vector<std::pair<std::string, std::string>>& subject_and_text,
                        const std::string& name, std::uint64_t seed, std::size_t max_tokens) {
  using State = std::pair<std::string, std::string>;
  std::map<State, std::vector<std::string>> chain;
  for (const auto& [subject, text] : subject_and_text) {
    auto words = split_words(mark_subject(text, subject));
    if (words.empty()) continue;
    State s{kBos, kBos};
    for (auto& w : words) {
      chain[s].push_back(w);
      s = {s.second, w};
    }
    chain[s].push_back(kEos);
  }

  const auto name_words = split_words(name);
  std::vector<std::string> walk;
  if (!chain.empty()) {
    Stream rng(seed);
    State s{kBos, kBos};
    while (walk.size() < max_tokens) {
      auto it = chain.find(s);
      if (it == chain.end()) break;
      const auto& next = it->second[rng.below(it->second.size())];
      if (next == kEos) break;
      walk.push_back(next);
      s = {s.second, next};
    }
  }

  std::vector<std::string> out;
  bool named_in_first = false;
  bool first_sentence = true;
  for (const auto& w : walk) {
    if (w == kSubject) {
      if (first_sentence) named_in_first = true;
      out.insert(out.end(), name_words.begin(), name_words.end());
    } else {
      out.push_back(w);
    }
    if (ends_sentence(w)) first_sentence = false;
  }
  if (!named_in_first) {
    std::vector<std::string> spliced = name_words;
    if (!spliced.empty()) {
      spliced.front() = capitalized(spliced.front());
      if (out.empty()) {
        spliced.back() += '.';
      } else {
        spliced.back() += ',';
        auto& w = out.front();
        if (w.size() > 1 && std::islower(static_cast<unsigned char>(w[1]))) {
          w[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(w[0])));
        }
      }
    }
    out.insert(out.begin(), spliced.begin(), spliced.end());
  }
  if (out.size() > max_tokens) out.resize(max_tokens);
  if (out.empty()) out.push_back(".");
  return join(out, " ");
}

// ---------------------------------------------------------------------------

MarkovGenerator::MarkovGenerator(const Corpus& corpus,
                                 std::shared_ptr<const AffordanceModel> affordances)
    : ir_(Vocabulary::fit(corpus_documents(corpus))), affordances_(std::move(affordances)) {
  for (const auto* l : corpus.regular_locations()) {
    locations_.push_back({l->name, l->description, l->background, {}});
  }
  for (const auto& c : corpus.characters()) {
    characters_.push_back({c.name, c.persona, c.description, {}});
  }
  for (const auto& o : corpus.objects()) {
    objects_.push_back({o.name, o.description, {}, {}});
  }
  if (!affordances_) {
    const auto examples = affordance_examples(corpus);
    if (!examples.empty()) {
      affordances_ = std::make_shared<const AffordanceModel>(train_affordance_model(examples));
    }
  }
  std::vector<std::string> names;
  for (const auto* list : {&locations_, &characters_, &objects_}) {
    for (const auto& s : *list) names.push_back(s.name);
  }
  ir_.prepare(names);
}

const std::vector<MarkovGenerator::Source>& MarkovGenerator::sources(ElementKind kind) const {
  switch (kind) {
    case ElementKind::location: return locations_;
    case ElementKind::character: return characters_;
    case ElementKind::object: return objects_;
  }
  return locations_;
}

std::vector<std::size_t> MarkovGenerator::retrieve(const std::string& name, ElementKind kind,
                                                   std::size_t k) const {
  const auto& src = sources(kind);
  if (src.empty()) return {};
  ScorerInput in;
  in.context_text = name;
  for (const auto& s : src) in.candidates.push_back({s.name, s.name});
  auto order = rank_scores(ir_.score(in));
  order.resize(std::min(k, order.size()));
  return order;
}

GeneratedElement MarkovGenerator::generate(const std::string& name, ElementKind kind,
                                           std::uint64_t seed) const {
  const std::string clean = trim(name);
  if (clean.empty()) throw std::invalid_argument("element name is empty");
  const auto& src = sources(kind);
  if (src.empty()) {
    throw std::invalid_argument("corpus has no " + std::string(to_string(kind)) + " cards");
  }

  GeneratedElement e;
  e.kind = kind;
  e.name = clean;
  e.generator = this->name();
  e.seed = seed;

  std::vector<std::pair<std::string, std::string>> first, second;
  for (auto i : retrieve(clean, kind, 3)) {
    e.sources.push_back(src[i].name);
    first.emplace_back(src[i].name, src[i].first);
    second.emplace_back(src[i].name, src[i].second);
  }
  const std::uint64_t key = fnv1a(fold_name(clean), seed);
  const std::string a = markov_text(first, clean, derive_seed(key, 1));
  const std::string b = markov_text(second, clean, derive_seed(key, 2));

  switch (kind) {
    case ElementKind::location:
      e.description = a;
      e.background = b;
      break;
    case ElementKind::character:
      e.persona = a;
      e.description = b;
      break;
    case ElementKind::object: {
      e.description = a;
      if (affordances_) {
        e.affordances = predict_affordances(*affordances_, clean, e.description).labels.names();
      }
      if (e.affordances.empty()) e.affordances.push_back("gettable");
      break;
    }
  }
  return e;
}

}  // namespace worldgen
