#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synpoly/dataset.hpp"
#include "synpoly/distance.hpp"
#include "synpoly/error.hpp"
#include "synpoly/parallel.hpp"
#include "synpoly/polynomial.hpp"
#include "synpoly/rational.hpp"

namespace synpoly {

/// Term vector sets for every (sentence, language) cell of a dataset.
class TermGrid {
 public:
  TermGrid(std::vector<std::string> sent_ids, std::vector<std::string> languages,
           std::vector<TermVectorSet> cells)
      : sent_ids_(std::move(sent_ids)), languages_(std::move(languages)), cells_(std::move(cells)) {
    if (cells_.size() != sent_ids_.size() * languages_.size()) {
      throw Error(ErrorKind::MissingTranslation, "term grid does not cover every sentence and language");
    }
  }

  const std::vector<std::string>& sent_ids() const noexcept { return sent_ids_; }
  const std::vector<std::string>& languages() const noexcept { return languages_; }

  const TermVectorSet& at(std::size_t sentence, std::size_t language) const {
    return cells_.at(sentence * languages_.size() + language);
  }

  std::size_t language_index(std::string_view code) const {
    auto it = std::find(languages_.begin(), languages_.end(), code);
    if (it == languages_.end()) {
      throw Error(ErrorKind::MissingTranslation, "language '" + std::string(code) + "' not in dataset");
    }
    return static_cast<std::size_t>(it - languages_.begin());
  }

  std::size_t sentence_index(std::string_view sent_id) const {
    auto it = std::find(sent_ids_.begin(), sent_ids_.end(), sent_id);
    if (it == sent_ids_.end()) {
      throw Error(ErrorKind::MissingTranslation, "sentence '" + std::string(sent_id) + "' not in dataset");
    }
    return static_cast<std::size_t>(it - sent_ids_.begin());
  }

 private:
  std::vector<std::string> sent_ids_;
  std::vector<std::string> languages_;
  std::vector<TermVectorSet> cells_;
};

inline TermGrid term_grid(const Dataset& data, unsigned workers = 1) {
  const auto n_lang = data.languages().size();
  std::vector<TermVectorSet> cells(data.tree_count());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    cells[i] = TermVectorSet::of(compute_labeled(data.tree(i / n_lang, i % n_lang)));
  });
  return TermGrid(data.sent_ids(), data.languages(), std::move(cells));
}

/// Symmetric matrix of exact distances with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::vector<std::string> labels)
      : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), Rational(0)) {}

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  const Rational& at(std::size_t i, std::size_t j) const { return values_.at(i * size() + j); }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, const Rational& v) {
    if (i == j && v != 0) throw Error(ErrorKind::DegenerateMatrix, "diagonal entries must be zero");
    values_.at(i * size() + j) = v;
    values_.at(j * size() + i) = v;
  }

  std::vector<std::vector<double>> to_doubles() const {
    std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) out[i][j] = to_double(at(i, j));
    }
    return out;
  }

  /// Rows and columns reordered so that new row k is old row order[k].
  DistanceMatrix permuted(const std::vector<std::size_t>& order) const {
    std::vector<std::string> labels;
    for (auto k : order) labels.push_back(labels_.at(k));
    DistanceMatrix out(std::move(labels));
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) out.set(i, j, at(order[i], order[j]));
    }
    return out;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Rational> values_;
};

/// Upper-triangle pairs (i < j) of an n x n matrix in row-major order.
inline std::vector<std::pair<std::size_t, std::size_t>> upper_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

/// Distances between the translations of each sentence: result[s][k] is the
/// distance for the k-th upper-triangle language pair of sentence s.
inline std::vector<std::vector<PolyDistance>> translation_distances(const TermGrid& grid,
                                                                    unsigned workers = 1) {
  const auto pairs = upper_pairs(grid.languages().size());
  std::vector<std::vector<PolyDistance>> out(grid.sent_ids().size());
  parallel_for(out.size(), workers, [&](std::size_t s) {
    auto& row = out[s];
    row.reserve(pairs.size());
    for (const auto& [i, j] : pairs) row.push_back(polynomial_distance(grid.at(s, i), grid.at(s, j)));
  });
  return out;
}

inline DistanceMatrix translation_matrix(const TermGrid& grid, std::string_view sent_id) {
  const auto s = grid.sentence_index(sent_id);
  DistanceMatrix m(grid.languages());
  for (const auto& [i, j] : upper_pairs(m.size())) {
    m.set(i, j, polynomial_distance(grid.at(s, i), grid.at(s, j)).value());
  }
  return m;
}

/// Entry-wise mean of the per-sentence translation matrices.
inline DistanceMatrix language_matrix(const std::vector<std::string>& languages,
                                      const std::vector<std::vector<PolyDistance>>& per_sentence) {
  DistanceMatrix m(languages);
  if (per_sentence.empty()) throw Error(ErrorKind::EmptySet, "language matrix needs at least one sentence");
  const auto pairs = upper_pairs(languages.size());
  const Rational count(per_sentence.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    RationalSum sum;
    for (const auto& row : per_sentence) sum.add(row.at(k).total, Integer(row.at(k).terms));
    m.set(pairs[k].first, pairs[k].second, sum.total() / count);
  }
  return m;
}

inline DistanceMatrix language_matrix(const TermGrid& grid, unsigned workers = 1) {
  return language_matrix(grid.languages(), translation_distances(grid, workers));
}

struct PairEntry {
  std::string first;
  std::string second;
  Rational value;
};

struct LabelValue {
  std::string label;
  Rational value;
};

struct LanguageSummary {
  Rational mean;
  Rational median;
  std::vector<PairEntry> smallest;  // ascending
  std::vector<PairEntry> largest;   // descending
  std::vector<LabelValue> average;  // per label, matrix order
  std::vector<LabelValue> smallest_average;
  std::vector<LabelValue> largest_average;
};

/// Mean and median over the strict upper triangle, the k closest and farthest
/// pairs, and each label's mean distance to all other labels. Ties keep
/// matrix order.
inline LanguageSummary summarize(const DistanceMatrix& m, std::size_t k = 3) {
  const auto n = m.size();
  if (n < 2) throw Error(ErrorKind::DegenerateMatrix, "summary needs at least two labels");
  const auto pairs = upper_pairs(n);

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto value = [&](std::size_t p) -> const Rational& { return m.at(pairs[p].first, pairs[p].second); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });

  LanguageSummary out;
  Rational sum = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p) sum += value(p);
  out.mean = sum / Rational(pairs.size());
  const auto mid = pairs.size() / 2;
  out.median = pairs.size() % 2 == 1 ? value(order[mid]) : (value(order[mid - 1]) + value(order[mid])) / 2;

  auto entry = [&](std::size_t p) {
    return PairEntry{m.labels()[pairs[p].first], m.labels()[pairs[p].second], value(p)};
  };
  const auto kk = std::min(k, pairs.size());
  for (std::size_t r = 0; r < kk; ++r) out.smallest.push_back(entry(order[r]));
  std::vector<std::size_t> desc = order;
  std::stable_sort(desc.begin(), desc.end(), [&](std::size_t a, std::size_t b) { return value(b) < value(a); });
  for (std::size_t r = 0; r < kk; ++r) out.largest.push_back(entry(desc[r]));

  for (std::size_t i = 0; i < n; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < n; ++j) row += m.at(i, j);
    out.average.push_back(LabelValue{m.labels()[i], row / Rational(n - 1)});
  }
  auto avg = out.average;
  std::stable_sort(avg.begin(), avg.end(), [](const LabelValue& a, const LabelValue& b) { return a.value < b.value; });
  const auto ka = std::min(k, n);
  out.smallest_average.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(ka));
  std::stable_sort(avg.begin(), avg.end(), [](const LabelValue& a, const LabelValue& b) { return b.value < a.value; });
  out.largest_average.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(ka));
  return out;
}

struct ExtremeSentences {
  std::string min_sent_id;
  Rational min_distance;
  std::vector<std::string> min_ties;  // every sent_id attaining the minimum, sorted
  std::string max_sent_id;
  Rational max_distance;
  std::vector<std::string> max_ties;
};

/// Sentences whose translations into `lang_a` and `lang_b` are closest and
/// farthest apart. Ties resolve to the lexicographically smallest sent_id.
inline ExtremeSentences extreme_sentences(const TermGrid& grid, std::string_view lang_a,
                                          std::string_view lang_b, unsigned workers = 1) {
  const auto a = grid.language_index(lang_a);
  const auto b = grid.language_index(lang_b);
  const auto& ids = grid.sent_ids();
  if (ids.empty()) throw Error(ErrorKind::MissingTranslation, "dataset has no sentences");

  std::vector<PolyDistance> dist(ids.size());
  parallel_for(ids.size(), workers, [&](std::size_t s) { dist[s] = polynomial_distance(grid.at(s, a), grid.at(s, b)); });

  const auto lo = *std::min_element(dist.begin(), dist.end());
  const auto hi = *std::max_element(dist.begin(), dist.end());
  ExtremeSentences out;
  out.min_distance = lo.value();
  out.max_distance = hi.value();
  for (std::size_t s = 0; s < ids.size(); ++s) {
    if (dist[s] == lo) out.min_ties.push_back(ids[s]);
    if (dist[s] == hi) out.max_ties.push_back(ids[s]);
  }
  std::sort(out.min_ties.begin(), out.min_ties.end());
  std::sort(out.max_ties.begin(), out.max_ties.end());
  out.min_sent_id = out.min_ties.front();
  out.max_sent_id = out.max_ties.front();
  return out;
}

}  // namespace synpoly
