#include "softaug/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "softaug/strings.hpp"

namespace softaug {

namespace {
const std::vector<std::string> kNoSynonyms;
}

void Thesaurus::add(const std::string& head, const std::vector<std::string>& synonyms) {
  const std::string key = lower_ascii(trim(head));
  if (key.empty()) return;
  auto& list = entries_[key];
  for (const auto& raw : synonyms) {
    std::string syn = lower_ascii(trim(raw));
    if (syn.empty() || syn == key) continue;
    if (std::find(list.begin(), list.end(), syn) == list.end()) list.push_back(syn);
  }
}

const std::vector<std::string>& Thesaurus::synonyms(const std::string& word) const {
  auto it = entries_.find(lower_ascii(word));
  return it == entries_.end() ? kNoSynonyms : it->second;
}

void StopwordSet::insert(const std::string& word) {
  std::string w = lower_ascii(trim(word));
  if (!w.empty()) words_.insert(std::move(w));
}

bool StopwordSet::contains(const std::string& word) const {
  return words_.count(lower_ascii(word)) > 0;
}

Thesaurus parse_thesaurus(std::istream& in, const std::string& origin) {
  Thesaurus thesaurus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(origin + ": missing TAB separator at line " +
                               std::to_string(line_no));
    }
    thesaurus.add(line.substr(0, tab), split(line.substr(tab + 1), '|'));
  }
  return thesaurus;
}

Thesaurus load_thesaurus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open thesaurus file: " + path);
  return parse_thesaurus(in, path);
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    std::string word = trim(line);
    if (word.empty() || word[0] == '#') continue;
    set.insert(word);
  }
  return set;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  return parse_stopwords(in);
}

// Raw asset text is generated from assets/ at configure time.
extern const char* const kBuiltinThesaurusText;
extern const char* const kBuiltinStopwordsText;

const Thesaurus& builtin_thesaurus() {
  static const Thesaurus instance = [] {
    std::istringstream in(kBuiltinThesaurusText);
    return parse_thesaurus(in, "<builtin thesaurus>");
  }();
  return instance;
}

const StopwordSet& builtin_stopwords() {
  static const StopwordSet instance = [] {
    std::istringstream in(kBuiltinStopwordsText);
    return parse_stopwords(in);
  }();
  return instance;
}

}  // namespace softaug
