#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "synpoly/error.hpp"

namespace synpoly {

inline constexpr int kRelationCount = 37;
inline constexpr int kRootRelation = 35;

/// Universal dependency relations, position i holds the relation with index i + 1.
inline constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "acl",       "advcl",      "advmod",  "amod",     "appos",     "aux",
    "case",      "cc",         "ccomp",   "clf",      "compound",  "conj",
    "cop",       "csubj",      "dep",     "det",      "discourse", "dislocated",
    "expl",      "fixed",      "flat",    "goeswith", "iobj",      "list",
    "mark",      "nmod",       "nsubj",   "nummod",   "obj",       "obl",
    "orphan",    "parataxis",  "punct",   "reparandum", "root",    "vocative",
    "xcomp",
};

/// Index of a head-dependent relation, always in 1..37.
class RelationIndex {
 public:
  constexpr explicit RelationIndex(int value) : value_(value) {
    if (value < 1 || value > kRelationCount) {
      throw Error(ErrorKind::UnknownRelation,
                  "relation index out of range: " + std::to_string(value));
    }
  }

  constexpr int value() const noexcept { return value_; }
  constexpr std::string_view name() const noexcept { return kRelationNames[value_ - 1]; }

  friend constexpr auto operator<=>(RelationIndex, RelationIndex) = default;

 private:
  int value_;
};

/// Drops a language-specific subtype (`obl:tmod` -> `obl`) and lowercases.
inline std::string strip_subtype(std::string_view deprel) {
  auto base = deprel.substr(0, deprel.find(':'));
  std::string out(base);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Expects an already stripped, lowercase relation name.
inline RelationIndex relation_to_index(std::string_view deprel) {
  auto it = std::find(kRelationNames.begin(), kRelationNames.end(), deprel);
  if (it == kRelationNames.end()) {
    throw Error(ErrorKind::UnknownRelation, "unknown relation '" + std::string(deprel) + "'");
  }
  return RelationIndex(static_cast<int>(it - kRelationNames.begin()) + 1);
}

inline bool is_known_relation(std::string_view raw_deprel) {
  auto base = strip_subtype(raw_deprel);
  return std::find(kRelationNames.begin(), kRelationNames.end(), base) != kRelationNames.end();
}

}  // namespace synpoly
