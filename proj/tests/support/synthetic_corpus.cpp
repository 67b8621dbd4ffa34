#include "synthetic_corpus.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "softaug/labels.hpp"
#include "softaug/rng.hpp"
#include "softaug/strings.hpp"

namespace softaug::testing {

namespace {

using Pool = std::vector<std::string>;

const Pool& pool(const std::string& slot) {
  static const Pool acronyms = {"nasa", "unesco", "radar",  "laser", "scuba",
                                "nato", "dna",    "unicef", "cern",  "fbi"};
  static const Pool objects = {"engine", "telescope", "violin",    "computer", "rocket",
                               "vaccine", "telephone", "camera",    "clock",    "machine"};
  static const Pool landmarks = {"tower",  "bridge", "castle",   "temple",  "palace",
                                 "statue", "museum", "monument", "stadium", "pyramid"};
  static const Pool countries = {"brazil", "france", "japan", "egypt",  "canada",
                                 "india",  "china",  "spain", "kenya",  "norway"};
  static const Pool cities = {"paris", "tokyo", "cairo",  "madrid", "lima",
                              "oslo",  "rome",  "boston", "dallas", "atlanta"};
  static const Pool rivers = {"nile", "amazon", "danube", "volga", "congo", "rhine"};
  static const Pool animals = {"tiger",   "whale", "falcon", "spider", "camel",
                               "dolphin", "panda", "eagle",  "horse",  "bear"};
  static const Pool roles = {"president", "author",   "painter", "scientist", "inventor",
                             "composer",  "explorer", "leader",  "architect", "queen"};
  static const Pool adjectives = {"largest", "smallest", "fastest",   "oldest",  "famous",
                                  "popular", "common",   "expensive", "ancient", "powerful"};
  static const Pool verbs = {"built",   "invented", "discovered", "wrote",   "painted",
                             "founded", "designed", "created",    "composed", "restored"};

  if (slot == "acronym") return acronyms;
  if (slot == "object") return objects;
  if (slot == "landmark") return landmarks;
  if (slot == "country") return countries;
  if (slot == "city") return cities;
  if (slot == "river") return rivers;
  if (slot == "animal") return animals;
  if (slot == "role") return roles;
  if (slot == "adjective") return adjectives;
  if (slot == "verb") return verbs;
  throw std::invalid_argument("synthetic corpus: unknown slot " + slot);
}

// One template per line; {slot} markers are filled uniformly from the
// matching pool. Leading n-grams differ per class so a window-3..5 CNN
// has learnable signal, while shared slot words keep classes overlapping.
const std::array<std::vector<std::string>, 6>& class_templates() {
  static const std::array<std::vector<std::string>, 6> templates = {{
      // abbreviation / expansion
      {"what does {acronym} stand for",
       "what is the abbreviation of the word {object}",
       "what does the acronym {acronym} mean",
       "how do you abbreviate the term {object}",
       "what is {acronym} short for"},
      // entity
      {"what {animal} lives in {country}",
       "what is the {adjective} {animal} in the world",
       "which {object} did the {role} use",
       "what breed of {animal} comes from {country}",
       "what color is the flag of {country}"},
      // description / definition
      {"why is the {landmark} so {adjective}",
       "how does a {object} work",
       "what is the origin of the {landmark}",
       "why does the {animal} sleep during winter",
       "what is the meaning of the {object}"},
      // human
      {"who {verb} the {object}",
       "which {role} {verb} the {landmark}",
       "who was the first {role} of {country}",
       "who is the most famous {role} in {country}",
       "what {role} {verb} the {object}"},
      // location
      {"where is the {landmark} located",
       "in which country is the {landmark}",
       "where can you find the {adjective} {landmark}",
       "which country borders {country}",
       "where does the {river} river start"},
      // numeric
      {"how many people live in {country}",
       "what year was the {landmark} {verb}",
       "how long is the {river} river",
       "how much does a {object} cost",
       "what is the population of {city}"},
  }};
  return templates;
}

// Templates drawn by BOTH classes of a pair (0<->3, 1<->4, 2<->5), making
// a quarter of the corpus irreducibly ambiguous: the text distribution is
// identical across the paired classes, so no classifier can separate those
// examples and the accuracy ceiling sits near 1 - 0.25/2 = 87.5%. Without
// this, every model saturates at 100% and method comparisons say nothing.
const std::array<std::vector<std::string>, 3>& shared_templates() {
  static const std::array<std::vector<std::string>, 3> templates = {{
      {"what does the {role} call the {acronym}",
       "who named the {acronym}",
       "what did the {role} abbreviate as {acronym}"},
      {"what {animal} crossed the {river} river",
       "which {landmark} has a {animal} statue",
       "what lies beyond the {adjective} {landmark}"},
      {"how {adjective} is the {object}",
       "what makes the {landmark} so {adjective}",
       "how far is {city} from the {river} river"},
  }};
  return templates;
}

constexpr double kAmbiguousShare = 0.25;

std::string fill_template(const std::string& tmpl, Rng& rng) {
  std::string text;
  for (const std::string& token : split(tmpl, ' ')) {
    if (!text.empty()) text += ' ';
    if (token.size() > 2 && token.front() == '{' && token.back() == '}') {
      const Pool& p = pool(token.substr(1, token.size() - 2));
      text += p[rng.next_index(p.size())];
    } else {
      text += token;
    }
  }
  return text;
}

}  // namespace

Corpus make_question_corpus(std::size_t n, std::uint64_t seed, double label_noise) {
  constexpr std::size_t n_classes = 6;
  Corpus corpus;
  corpus.n_classes = n_classes;
  corpus.name = "synthetic-questions";
  corpus.examples.reserve(n);

  const auto& templates = class_templates();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cls = i % n_classes;
    Rng rng = Rng::keyed(seed, i, 0);
    const std::vector<std::string>& options = rng.next_bernoulli(kAmbiguousShare)
                                                  ? shared_templates()[std::min(cls, (cls + 3) % 6)]
                                                  : templates[cls];
    const std::string text = fill_template(options[rng.next_index(options.size())], rng);

    std::size_t label = cls;
    if (label_noise > 0.0 && rng.next_bernoulli(label_noise)) {
      label = rng.next_index(n_classes - 1);
      if (label >= cls) ++label;  // uniform over the five wrong classes
    }
    corpus.examples.push_back({text, one_hot(label, n_classes), Origin::Original});
  }
  return corpus;
}

Corpus make_toy_separable() {
  static const Pool pool_a = {"quasar", "vortex", "nebula", "plasma",
                              "photon", "meteor", "comet",  "eclipse"};
  static const Pool pool_b = {"willow", "moss",  "cedar", "tulip",
                              "clover", "maple", "fern",  "orchid"};
  Corpus corpus;
  corpus.n_classes = 2;
  corpus.name = "toy-separable";
  for (std::size_t i = 0; i < 32; ++i) {
    const std::size_t cls = i % 2;
    const Pool& p = cls == 0 ? pool_a : pool_b;
    Rng rng = Rng::keyed(99, i, 0);
    const std::size_t len = 4 + rng.next_index(3);
    std::string text;
    for (std::size_t t = 0; t < len; ++t) {
      if (!text.empty()) text += ' ';
      text += p[rng.next_index(p.size())];
    }
    corpus.examples.push_back({text, one_hot(cls, 2), Origin::Original});
  }
  return corpus;
}

}  // namespace softaug::testing
