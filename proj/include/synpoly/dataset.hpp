#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synpoly/conllu.hpp"
#include "synpoly/deptree.hpp"
#include "synpoly/error.hpp"

namespace synpoly {

/// Matrix row order: languages grouped by family (ISO 639-2/B codes).
inline constexpr std::array<std::string_view, 20> kLanguageOrder = {
    "eng", "ger", "swe", "ice", "fre", "ita", "por", "spa", "cze", "pol",
    "rus", "hin", "ara", "chi", "fin", "ind", "jpn", "kor", "tha", "tur",
};

/// ISO 639-1 prefixes used in treebank file names, aligned with kLanguageOrder.
inline constexpr std::array<std::string_view, 20> kTreebankPrefixes = {
    "en", "de", "sv", "is", "fr", "it", "pt", "es", "cs", "pl",
    "ru", "hi", "ar", "zh", "fi", "id", "ja", "ko", "th", "tr",
};

/// Datasets are named after the original language of their sentences.
inline constexpr std::array<std::string_view, 5> kSplitNames = {"ENG", "GER", "FRE", "ITA", "SPA"};

/// Sentence counts of each split in the full parallel corpus.
inline constexpr std::array<std::size_t, 5> kSplitSizes = {750, 100, 50, 50, 50};

inline bool is_split_name(std::string_view name) {
  return std::find(kSplitNames.begin(), kSplitNames.end(), name) != kSplitNames.end();
}

/// Puts known codes in kLanguageOrder order, unknown ones after them sorted.
inline std::vector<std::string> order_languages(std::vector<std::string> codes) {
  auto rank = [](const std::string& code) {
    auto it = std::find(kLanguageOrder.begin(), kLanguageOrder.end(), code);
    return static_cast<std::size_t>(it - kLanguageOrder.begin());
  };
  std::sort(codes.begin(), codes.end(), [&](const std::string& a, const std::string& b) {
    auto ra = rank(a);
    auto rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

/// sent_id -> split name.
using SplitMapping = std::map<std::string, std::string>;

/// Reads `sent_id<TAB>SPLIT` lines; blank lines and `#` comments are skipped.
inline SplitMapping parse_split_mapping(std::string_view text) {
  SplitMapping mapping;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto cols = detail::split_tabs(trimmed);
    if (cols.size() != 2 || cols[0].empty() || !is_split_name(detail::trim(cols[1]))) {
      throw Error(ErrorKind::MalformedLine,
                  "split mapping line " + std::to_string(line_no) + ": expected sent_id<TAB>{ENG,GER,FRE,ITA,SPA}");
    }
    mapping[std::string(cols[0])] = std::string(detail::trim(cols[1]));
  }
  return mapping;
}

/// Parallel-corpus sent_ids look like `n01001011` or `w05003022`: a source
/// letter, then two digits naming the original language
/// (01 eng, 02 ger, 03 fre, 04 ita, 05 spa).
inline std::optional<std::string> split_from_sent_id(std::string_view sent_id) {
  if (sent_id.size() < 3 || (sent_id[0] != 'n' && sent_id[0] != 'w') || sent_id[1] != '0' ||
      sent_id[2] < '1' || sent_id[2] > '5') {
    return std::nullopt;
  }
  return std::string(kSplitNames[static_cast<std::size_t>(sent_id[2] - '1')]);
}

/// Sentences of one split, aligned by sent_id across languages.
class Dataset {
 public:
  Dataset(std::string name, std::vector<std::string> languages, std::vector<std::string> sent_ids,
          std::vector<DepTree> trees)
      : name_(std::move(name)),
        languages_(std::move(languages)),
        sent_ids_(std::move(sent_ids)),
        trees_(std::move(trees)) {}

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& languages() const noexcept { return languages_; }
  const std::vector<std::string>& sent_ids() const noexcept { return sent_ids_; }
  std::size_t tree_count() const noexcept { return trees_.size(); }

  const DepTree& tree(std::size_t sentence, std::size_t language) const {
    return trees_.at(sentence * languages_.size() + language);
  }

  const DepTree& at(std::string_view sent_id, std::string_view language) const {
    return tree(sentence_index(sent_id), language_index(language));
  }

  std::size_t language_index(std::string_view code) const {
    auto it = std::find(languages_.begin(), languages_.end(), code);
    if (it == languages_.end()) {
      throw Error(ErrorKind::MissingTranslation, "language '" + std::string(code) + "' not in dataset");
    }
    return static_cast<std::size_t>(it - languages_.begin());
  }

  std::size_t sentence_index(std::string_view sent_id) const {
    auto it = std::lower_bound(sent_ids_.begin(), sent_ids_.end(), sent_id);
    if (it == sent_ids_.end() || *it != sent_id) {
      throw Error(ErrorKind::MissingTranslation, "sentence '" + std::string(sent_id) + "' not in dataset");
    }
    return static_cast<std::size_t>(it - sent_ids_.begin());
  }

 private:
  std::string name_;
  std::vector<std::string> languages_;
  std::vector<std::string> sent_ids_;  // sorted
  std::vector<DepTree> trees_;         // row-major: sentence x language
};

/// Assembles the `split` dataset from parsed treebanks.
///
/// `treebanks` maps language code to its sentences. Every sent_id in any
/// treebank must be covered by `mapping` (SplitMismatch), and each sent_id of
/// the requested split must occur in every language (MissingTranslation).
inline Dataset build_dataset(const std::map<std::string, std::vector<SentenceRecord>>& treebanks,
                             const SplitMapping& mapping, std::string_view split) {
  if (treebanks.empty()) throw Error(ErrorKind::MissingTranslation, "no treebanks supplied");

  std::vector<std::string> languages;
  for (const auto& [code, _] : treebanks) languages.push_back(code);
  languages = order_languages(std::move(languages));

  std::set<std::string> unmapped;
  std::set<std::string> wanted;
  std::vector<std::map<std::string, const SentenceRecord*>> index(languages.size());
  for (std::size_t l = 0; l < languages.size(); ++l) {
    for (const auto& rec : treebanks.at(languages[l])) {
      auto it = mapping.find(rec.sent_id);
      if (it == mapping.end()) {
        unmapped.insert(rec.sent_id);
        continue;
      }
      if (it->second != split) continue;
      wanted.insert(rec.sent_id);
      if (!index[l].emplace(rec.sent_id, &rec).second) {
        throw Error(ErrorKind::MalformedLine,
                    "duplicate sent_id '" + rec.sent_id + "' in language " + languages[l]);
      }
    }
  }
  if (!unmapped.empty()) {
    std::string list;
    for (const auto& id : unmapped) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorKind::SplitMismatch, "sent_ids not covered by the split mapping: " + list);
  }

  if (wanted.empty()) {
    throw Error(ErrorKind::SplitMismatch, "no sentence belongs to split " + std::string(split));
  }

  std::string missing;
  for (const auto& id : wanted) {
    for (std::size_t l = 0; l < languages.size(); ++l) {
      if (!index[l].contains(id)) missing += (missing.empty() ? "" : ", ") + id + " (" + languages[l] + ")";
    }
  }
  if (!missing.empty()) throw Error(ErrorKind::MissingTranslation, "missing translations: " + missing);

  std::vector<std::string> sent_ids(wanted.begin(), wanted.end());
  std::vector<DepTree> trees;
  trees.reserve(sent_ids.size() * languages.size());
  for (const auto& id : sent_ids) {
    for (std::size_t l = 0; l < languages.size(); ++l) trees.push_back(from_sentence(*index[l].at(id)));
  }
  return Dataset(std::string(split), std::move(languages), std::move(sent_ids), std::move(trees));
}

}  // namespace synpoly
