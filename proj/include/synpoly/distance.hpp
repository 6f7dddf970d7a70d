#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "synpoly/error.hpp"
#include "synpoly/polynomial.hpp"
#include "synpoly/rational.hpp"

namespace synpoly {

/// Manhattan distance over all 75 entries, coefficient included.
inline Integer manhattan(const TermVector& s, const TermVector& t) {
  std::int64_t exp = 0;
  for (std::size_t i = 0; i < TermVector::kExponents; ++i) {
    exp += std::abs(static_cast<std::int64_t>(s.exponents[i]) - static_cast<std::int64_t>(t.exponents[i]));
  }
  Integer diff = s.coefficient - t.coefficient;
  if (diff < 0) diff = -diff;
  return diff + exp;
}

/// The term vectors of one polynomial, with a packed copy for fast distance
/// evaluation when every entry is small enough for 64-bit accumulation.
class TermVectorSet {
 public:
  TermVectorSet() = default;
  explicit TermVectorSet(std::vector<TermVector> vectors) : vectors_(std::move(vectors)) {
    std::sort(vectors_.begin(), vectors_.end());
    compact_ = vectors_.size() < kMaxCompactTerms;
    for (const auto& v : vectors_) {
      if (v.coefficient >= kMaxCompactCoefficient) compact_ = false;
      for (auto e : v.exponents) {
        if (e >= kMaxCompactExponent) compact_ = false;
      }
    }
    if (!compact_) return;

    // Packed copy ordered by entry sum, which bounds the L1 distance from below.
    const std::size_t n = vectors_.size();
    std::vector<std::int64_t> sums(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t x = 0, y = 0;
      for (std::size_t k = 0; k < TermVector::kExponents; ++k) {
        (k < kRelationCount ? x : y) += vectors_[i].exponents[k];
      }
      sums[i] = x + y + vectors_[i].coefficient.convert_to<std::int64_t>();
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sums[a] < sums[b]; });
    packed_.narrow = true;
    for (const auto& v : vectors_) {
      for (auto e : v.exponents) packed_.narrow = packed_.narrow && e <= 0xff;
    }
    packed_.rows.reserve(n * TermVector::kExponents);
    if (packed_.narrow) packed_.bytes.reserve(n * kByteStride);
    for (auto i : order) {
      const auto& v = vectors_[i];
      std::int64_t x = 0, y = 0;
      for (std::size_t k = 0; k < TermVector::kExponents; ++k) {
        packed_.rows.push_back(static_cast<std::int32_t>(v.exponents[k]));
        if (packed_.narrow) packed_.bytes.push_back(static_cast<std::uint8_t>(v.exponents[k]));
        (k < kRelationCount ? x : y) += v.exponents[k];
      }
      if (packed_.narrow) packed_.bytes.resize(packed_.bytes.size() + kByteStride - TermVector::kExponents, 0);
      packed_.coefficient.push_back(v.coefficient.convert_to<std::int64_t>());
      packed_.x_degree.push_back(x);
      packed_.y_degree.push_back(y);
      packed_.key.push_back(sums[i]);
    }
  }

  static TermVectorSet of(const Polynomial& p) { return TermVectorSet(to_term_vectors(p)); }

  std::size_t size() const noexcept { return vectors_.size(); }
  bool empty() const noexcept { return vectors_.empty(); }
  const std::vector<TermVector>& vectors() const noexcept { return vectors_; }
  bool compact() const noexcept { return compact_; }

  friend bool operator==(const TermVectorSet& a, const TermVectorSet& b) {
    return a.vectors_ == b.vectors_;
  }

  /// Drops the packed copy; distances then use arbitrary-precision arithmetic only.
  TermVectorSet without_fast_path() const {
    TermVectorSet copy;
    copy.vectors_ = vectors_;
    return copy;
  }

 private:
  friend struct DistanceKernel;

  static constexpr std::size_t kMaxCompactTerms = std::size_t{1} << 20;
  static constexpr std::uint32_t kMaxCompactExponent = std::uint32_t{1} << 20;
  static inline const Integer kMaxCompactCoefficient = Integer(1) << 40;

  static constexpr std::size_t kByteStride = 80;  // 74 exponents, zero padded

  struct Packed {
    std::vector<std::int32_t> rows;  // 74 exponents per term
    bool narrow = false;             // every exponent fits in a byte
    std::vector<std::uint8_t> bytes;  // same rows, kByteStride per term, when narrow
    std::vector<std::int64_t> coefficient;
    std::vector<std::int64_t> x_degree;
    std::vector<std::int64_t> y_degree;
    std::vector<std::int64_t> key;  // exponent sum + coefficient, ascending
  };

  std::vector<TermVector> vectors_;
  bool compact_ = false;
  Packed packed_;
};

/// Exact value of the polynomial distance: `total / terms`.
struct PolyDistance {
  Integer total;            // sum of both nearest-term distance sums
  std::uint64_t terms = 0;  // |V_P| + |V_Q|

  Rational value() const { return Rational(total, Integer(terms)); }
  double to_double() const { return value().convert_to<double>(); }
  bool is_zero() const { return total == 0; }

  friend bool operator==(const PolyDistance& a, const PolyDistance& b) {
    return a.value() == b.value();
  }
  friend auto operator<=>(const PolyDistance& a, const PolyDistance& b) {
    // total_a / terms_a vs total_b / terms_b, cross-multiplied
    Integer lhs = a.total * b.terms;
    Integer rhs = b.total * a.terms;
    return lhs < rhs ? std::strong_ordering::less
                     : (rhs < lhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
};

struct DistanceKernel {
  static std::int32_t row_distance(const std::int32_t* a, const std::int32_t* b) {
    std::int32_t d = 0;
    for (std::size_t k = 0; k < TermVector::kExponents; ++k) {
      const std::int32_t diff = a[k] - b[k];
      d += diff < 0 ? -diff : diff;
    }
    return d;
  }

  static std::int32_t row_distance(const std::uint8_t* a, const std::uint8_t* b) {
    std::int32_t d = 0;
    for (std::size_t k = 0; k < TermVectorSet::kByteStride; ++k) {
      d += std::abs(static_cast<std::int32_t>(a[k]) - static_cast<std::int32_t>(b[k]));
    }
    return d;
  }

  /// Sum over terms of `a` of the distance to the nearest term of `b`.
  /// Candidates are visited outward from the query's key; a direction stops
  /// once the key gap alone reaches the best distance found.
  template <typename Row>
  static std::int64_t nearest_sum(const TermVectorSet& a, const TermVectorSet& b, const Row* rows_a,
                                  const Row* rows_b, std::size_t stride) {
    const auto& pa = a.packed_;
    const auto& pb = b.packed_;
    const auto m = static_cast<std::ptrdiff_t>(b.size());
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Row* row = rows_a + i * stride;
      const std::int64_t key = pa.key[i];
      const std::int64_t coef = pa.coefficient[i];
      const std::int64_t xd = pa.x_degree[i];
      const std::int64_t yd = pa.y_degree[i];
      std::int64_t best = std::numeric_limits<std::int64_t>::max();

      auto visit = [&](std::ptrdiff_t j) {
        const std::int64_t dc = std::abs(coef - pb.coefficient[j]);
        if (std::abs(xd - pb.x_degree[j]) + std::abs(yd - pb.y_degree[j]) + dc >= best) return;
        best = std::min(best, row_distance(row, rows_b + static_cast<std::size_t>(j) * stride) + dc);
      };

      auto hi = static_cast<std::ptrdiff_t>(std::lower_bound(pb.key.begin(), pb.key.end(), key) - pb.key.begin());
      auto lo = hi - 1;
      while (lo >= 0 || hi < m) {
        const std::int64_t up = hi < m ? pb.key[hi] - key : std::numeric_limits<std::int64_t>::max();
        const std::int64_t down = lo >= 0 ? key - pb.key[lo] : std::numeric_limits<std::int64_t>::max();
        if (std::min(up, down) >= best) break;
        if (up <= down) {
          visit(hi++);
        } else {
          visit(lo--);
        }
      }
      sum += best;
    }
    return sum;
  }

  static std::int64_t nearest_sum(const TermVectorSet& a, const TermVectorSet& b) {
    if (a.packed_.narrow && b.packed_.narrow) {
      return nearest_sum(a, b, a.packed_.bytes.data(), b.packed_.bytes.data(), TermVectorSet::kByteStride);
    }
    return nearest_sum(a, b, a.packed_.rows.data(), b.packed_.rows.data(), TermVector::kExponents);
  }

  static Integer compact_sum(const TermVectorSet& p, const TermVectorSet& q) {
    return Integer(nearest_sum(p, q)) + Integer(nearest_sum(q, p));
  }

  static Integer exact_sum(const TermVectorSet& p, const TermVectorSet& q) {
    std::vector<Integer> row_min(p.size());
    std::vector<Integer> col_min(q.size());
    std::vector<bool> col_seen(q.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        Integer d = manhattan(p.vectors_[i], q.vectors_[j]);
        if (j == 0 || d < row_min[i]) row_min[i] = d;
        if (!col_seen[j] || d < col_min[j]) {
          col_min[j] = d;
          col_seen[j] = true;
        }
      }
    }
    Integer sum = 0;
    for (const auto& v : row_min) sum += v;
    for (const auto& v : col_min) sum += v;
    return sum;
  }
};

/// Average over every term of both sets of the Manhattan distance to the
/// nearest term of the other set.
inline PolyDistance polynomial_distance(const TermVectorSet& p, const TermVectorSet& q) {
  if (p.empty() || q.empty()) {
    throw Error(ErrorKind::EmptySet, "polynomial distance needs non-empty term vector sets");
  }
  PolyDistance out;
  out.terms = p.size() + q.size();
  out.total = p.compact() && q.compact() ? DistanceKernel::compact_sum(p, q)
                                         : DistanceKernel::exact_sum(p, q);
  return out;
}

inline PolyDistance polynomial_distance(const Polynomial& p, const Polynomial& q) {
  return polynomial_distance(TermVectorSet::of(p), TermVectorSet::of(q));
}

}  // namespace synpoly
