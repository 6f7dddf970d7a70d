#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "synpoly/distance.hpp"
#include "synpoly/error.hpp"
#include "synpoly/matrices.hpp"
#include "synpoly/parallel.hpp"
#include "synpoly/rational.hpp"

namespace synpoly {

struct HistogramBin {
  Rational lo;  // inclusive
  Rational hi;  // exclusive
  std::uint64_t count = 0;
};

struct CorpusStats {
  std::string language;
  std::uint64_t n_sentences = 0;
  std::uint64_t n_pairs = 0;
  Rational diameter;
  Rational mean;
  std::vector<HistogramBin> bins;  // from 0 up to the bin holding the diameter

  // Not part of the diameter/mean pair; reported as extras.
  Rational min_distance;
  double variance = 0.0;
};

/// All pairwise sentence distances within one language's corpus of a dataset.
/// Pairs are streamed row by row; only per-row aggregates are kept.
inline CorpusStats corpus_stats(const TermGrid& grid, std::string_view language, const Rational& bin_width,
                                unsigned workers = 1) {
  if (bin_width <= 0) throw Error(ErrorKind::DegenerateMatrix, "bin width must be positive");
  const auto l = grid.language_index(language);
  const auto n = grid.sent_ids().size();
  const Integer w_num = boost::multiprecision::numerator(bin_width);
  const Integer w_den = boost::multiprecision::denominator(bin_width);

  struct RowAggregate {
    RationalSum sum;
    std::map<std::uint64_t, std::uint64_t> bins;
    std::optional<PolyDistance> max;
    std::optional<PolyDistance> min;
    double sum_sq = 0.0;
  };
  std::vector<RowAggregate> rows(n);
  parallel_for(n, workers, [&](std::size_t i) {
    auto& agg = rows[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      auto d = polynomial_distance(grid.at(i, l), grid.at(j, l));
      const Integer terms(d.terms);
      agg.sum.add(d.total, terms);
      // bin k satisfies k*w <= total/terms < (k+1)*w
      Integer k = (d.total * w_den) / (terms * w_num);
      ++agg.bins[k.convert_to<std::uint64_t>()];
      const double v = d.to_double();
      agg.sum_sq += v * v;
      if (!agg.max || *agg.max < d) agg.max = d;
      if (!agg.min || d < *agg.min) agg.min = d;
    }
  });

  CorpusStats out;
  out.language = std::string(language);
  out.n_sentences = n;
  out.n_pairs = n * (n - (n > 0)) / 2;
  RationalSum sum;
  std::map<std::uint64_t, std::uint64_t> bins;
  std::optional<PolyDistance> max;
  std::optional<PolyDistance> min;
  double sum_sq = 0.0;
  for (const auto& agg : rows) {
    sum.merge(agg.sum);
    for (const auto& [k, c] : agg.bins) bins[k] += c;
    if (agg.max && (!max || *max < *agg.max)) max = agg.max;
    if (agg.min && (!min || *agg.min < *min)) min = agg.min;
    sum_sq += agg.sum_sq;
  }
  if (out.n_pairs == 0) return out;

  out.diameter = max->value();
  out.min_distance = min->value();
  out.mean = sum.total() / Rational(out.n_pairs);
  const double mean = to_double(out.mean);
  out.variance = std::max(0.0, sum_sq / static_cast<double>(out.n_pairs) - mean * mean);
  const auto top = bins.rbegin()->first;
  for (std::uint64_t k = 0; k <= top; ++k) {
    auto it = bins.find(k);
    out.bins.push_back(HistogramBin{bin_width * Rational(k), bin_width * Rational(k + 1),
                                    it == bins.end() ? 0 : it->second});
  }
  return out;
}

}  // namespace synpoly
