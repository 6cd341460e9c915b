#include "worldgen/planted.hpp"

#include <set>
#include <string>

#include "worldgen/rng.hpp"

namespace worldgen {

std::vector<LocationCard> filler_library() {
  static const std::pair<const char*, const char*> kFillers[] = {
      {"abandoned shack", "A rickety shack with a sagging roof. Nobody has lived here for years."},
      {"empty closet", "A cramped closet with bare shelves and a musty smell."},
      {"storage room", "Crates and sacks are stacked against the walls of this plain room."},
      {"unused chamber", "A bare chamber with nothing of note inside."},
      {"hallway", "A long hallway with plain walls and a worn floor."},
      {"empty storage room", "Empty shelves line this dusty storage room."},
      {"dusty corridor", "Dust drifts along a narrow corridor between rooms."},
      {"narrow passage", "A tight passage barely wide enough for one person."},
      {"quiet alcove", "A small alcove set back from the main path."},
      {"old cellar", "A cool cellar with a packed dirt floor."},
      {"bare antechamber", "A plain waiting room before a larger space."},
      {"small landing", "A small landing where two stairways meet."},
      {"cold stairwell", "Stone steps wind upward in a chilly stairwell."},
      {"plain courtyard", "An open courtyard paved with uneven stones."},
      {"dim vestibule", "A dim entryway with a single hook on the wall."},
      {"back room", "A cluttered back room used for odds and ends."},
      {"cramped pantry", "A cramped pantry with a few empty jars."},
      {"disused shed", "A wooden shed that has not been opened in a long time."},
      {"forgotten attic", "A low attic under the rafters, thick with cobwebs."},
      {"side passage", "A side passage branching off the main way."},
      {"stone path", "A simple path of flat stones through the grass."},
      {"dirt road", "A rutted dirt road leading onward."},
      {"empty barn", "A barn with empty stalls and a little old hay."},
      {"overgrown clearing", "A small clearing choked with weeds."},
      {"drafty loft", "A drafty loft reached by a wobbly ladder."},
  };
  std::vector<LocationCard> out;
  std::size_t i = 0;
  for (const auto& [name, desc] : kFillers) {
    LocationCard c;
    c.id = "filler-" + std::to_string(++i);
    c.name = name;
    c.description = desc;
    c.category = "other";
    c.is_filler = true;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

const char* const kGenericAdjectives[] = {"old",   "quiet", "small", "wide",  "high",
                                          "low",   "long",  "grey",  "plain", "far",
                                          "upper", "lower", "inner", "outer", "north"};
const char* const kGenericNouns[] = {"hall",  "room",   "place", "corner", "yard",
                                     "ward",  "quarter", "court", "gate",   "rise"};
const char* const kFillerWords[] = {"a", "the", "with", "and", "near", "of", "some", "many",
                                    "here", "there", "is", "are", "by", "under", "over"};
const char* const kRoles[] = {"keeper", "guard", "trader", "scholar", "hermit", "scout"};
const char* const kThings[] = {"lantern", "box", "charm", "cloak", "flask", "blade"};

class WordMaker {
 public:
  explicit WordMaker(std::uint64_t seed) : rng_(seed) {}
  std::string next() {
    static const char kC[] = "bdfgklmnprstvz";
    static const char kV[] = "aeiou";
    for (;;) {
      std::string w;
      for (int s = 0; s < 3; ++s) {
        w.push_back(kC[rng_.below(sizeof(kC) - 1)]);
        w.push_back(kV[rng_.below(sizeof(kV) - 1)]);
      }
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Stream rng_;
  std::set<std::string> used_;
};

template <std::size_t N>
const char* pick(Stream& rng, const char* const (&arr)[N]) {
  return arr[rng.below(N)];
}

}  // namespace

Corpus make_planted_corpus(const PlantedCorpusSpec& spec) {
  Stream rng(derive_seed(spec.seed, 0x9a));
  WordMaker words(derive_seed(spec.seed, 0x77));

  std::vector<LocationCard> locations;
  std::vector<CharacterCard> characters;
  std::vector<ObjectCard> objects;

  for (std::size_t c = 0; c < spec.clusters; ++c) {
    std::vector<std::string> theme;
    for (std::size_t k = 0; k < spec.theme_words; ++k) theme.push_back(words.next());

    auto theme_phrase = [&](std::size_t n) {
      std::string out;
      for (auto i : rng.sample_indices(theme.size(), n)) {
        out += ' ';
        out += pick(rng, kFillerWords);
        out += ' ';
        out += theme[i];
      }
      return out;
    };

    std::vector<std::string> char_names, object_names;
    for (std::size_t k = 0; k < spec.characters_per_cluster; ++k) {
      CharacterCard ch;
      ch.id = "pc" + std::to_string(c) + "-" + std::to_string(k);
      ch.name = theme[k % theme.size()] + " " + kRoles[k % std::size(kRoles)];
      ch.persona = "I watch over" + theme_phrase(2) + ".";
      ch.description = "A figure" + theme_phrase(2) + ".";
      char_names.push_back(ch.name);
      characters.push_back(std::move(ch));
    }
    for (std::size_t k = 0; k < spec.objects_per_cluster; ++k) {
      ObjectCard ob;
      ob.id = "po" + std::to_string(c) + "-" + std::to_string(k);
      ob.name = theme[(k + 3) % theme.size()] + " " + kThings[k % std::size(kThings)];
      ob.description = "An item" + theme_phrase(2) + ".";
      ob.affordances = {"gettable"};
      object_names.push_back(ob.name);
      objects.push_back(std::move(ob));
    }
    // First object of each cluster is a container holding the others.
    if (spec.objects_per_cluster > 1) {
      auto& box = objects[objects.size() - spec.objects_per_cluster];
      box.affordances.push_back("container");
      box.contained_examples.assign(object_names.begin() + 1, object_names.end());
    }

    const std::size_t base = locations.size();
    for (std::size_t k = 0; k < spec.locations_per_cluster; ++k) {
      LocationCard loc;
      loc.id = "pl" + std::to_string(c) + "-" + std::to_string(k);
      const std::string adj = rng.bernoulli(spec.name_theme_prob)
                                  ? theme[rng.below(theme.size())]
                                  : std::string(pick(rng, kGenericAdjectives));
      loc.name = adj + " " + pick(rng, kGenericNouns) + " of " + words.next();
      loc.description = "A " + std::string(pick(rng, kGenericAdjectives)) + " " +
                        pick(rng, kGenericNouns) + theme_phrase(spec.description_theme_words) + ".";
      loc.category = "other";
      for (auto i : rng.sample_indices(char_names.size(), std::min<std::size_t>(2, char_names.size()))) {
        loc.characters.push_back(char_names[i]);
      }
      for (auto i : rng.sample_indices(object_names.size(), std::min<std::size_t>(3, object_names.size()))) {
        loc.objects.push_back(object_names[i]);
      }
      locations.push_back(std::move(loc));
    }
    for (std::size_t k = 0; k < spec.locations_per_cluster; ++k) {
      const std::size_t want = std::min(spec.neighbors_per_location, spec.locations_per_cluster - 1);
      for (auto i : rng.sample_indices(spec.locations_per_cluster - 1, want)) {
        const std::size_t other = i >= k ? i + 1 : i;
        locations[base + k].neighbors.push_back(locations[base + other].name);
      }
    }
  }

  for (auto& f : filler_library()) locations.push_back(std::move(f));
  Corpus corpus(std::move(locations), std::move(characters), std::move(objects));
  return make_splits(corpus, spec.ratios, spec.seed);
}

}  // namespace worldgen
