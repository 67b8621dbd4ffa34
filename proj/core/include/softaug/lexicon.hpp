#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace softaug {

// Word -> ordered list of distinct synonyms. All entries are lowercase and
// no word lists itself as its own synonym.
class Thesaurus {
 public:
  // Merges into an existing entry: order-preserving, duplicates and the
  // head word itself are dropped.
  void add(const std::string& head, const std::vector<std::string>& synonyms);

  // Case-insensitive lookup; unknown words yield an empty list.
  const std::vector<std::string>& synonyms(const std::string& word) const;

  bool has_synonyms(const std::string& word) const { return !synonyms(word).empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

// Exact-match membership on the lowercase form.
class StopwordSet {
 public:
  void insert(const std::string& word);
  bool contains(const std::string& word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Thesaurus file: one `word<TAB>syn1|syn2|...` entry per line. Blank lines
// are skipped; a non-blank line without a TAB is an error naming the line.
Thesaurus load_thesaurus(const std::string& path);
Thesaurus parse_thesaurus(std::istream& in, const std::string& origin);

// Stopword file: one word per line; blank lines and '#' comments skipped.
StopwordSet load_stopwords(const std::string& path);
StopwordSet parse_stopwords(std::istream& in);

// Bundled English defaults, compiled in so no runtime files are required.
// Override with load_thesaurus / load_stopwords on user files.
const Thesaurus& builtin_thesaurus();
const StopwordSet& builtin_stopwords();

}  // namespace softaug
