#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "synpoly/deptree.hpp"
#include "synpoly/error.hpp"
#include "synpoly/rational.hpp"
#include "synpoly/relations.hpp"

namespace synpoly {

using Coefficient = Integer;

enum class Mode { Unlabeled, Labeled };

/// Variable slots. Labeled mode uses x_1..x_37 then y_1..y_37 (74 slots);
/// unlabeled mode uses the two slots x and y.
namespace slot {
using Index = std::uint8_t;
inline constexpr Index kLabeledCount = 2 * kRelationCount;
inline constexpr Index kUnlabeledX = 0;
inline constexpr Index kUnlabeledY = 1;

constexpr Index x(RelationIndex label) { return static_cast<Index>(label.value() - 1); }
constexpr Index y(RelationIndex label) {
  return static_cast<Index>(kRelationCount + label.value() - 1);
}
constexpr bool is_y(Mode mode, Index s) {
  return mode == Mode::Labeled ? s >= kRelationCount : s == kUnlabeledY;
}
}  // namespace slot

/// Sparse exponent vector: (slot, exponent) pairs sorted by slot, no zero exponents.
class Monomial {
 public:
  using Entry = std::pair<slot::Index, std::uint32_t>;

  Monomial() = default;
  static Monomial variable(slot::Index s) {
    Monomial m;
    m.entries_.emplace_back(s, 1);
    return m;
  }

  /// Entries must be sorted by slot with non-zero exponents.
  static Monomial from_entries(std::vector<Entry> entries) {
    Monomial m;
    m.entries_ = std::move(entries);
    return m;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  std::uint32_t exponent(slot::Index s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{s, 0},
                               [](const Entry& a, const Entry& b) { return a.first < b.first; });
    return it != entries_.end() && it->first == s ? it->second : 0;
  }

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (const auto& e : entries_) d += e.second;
    return d;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.entries_.reserve(a.entries_.size() + b.entries_.size());
    auto i = a.entries_.begin();
    auto j = b.entries_.begin();
    while (i != a.entries_.end() && j != b.entries_.end()) {
      if (i->first < j->first) {
        out.entries_.push_back(*i++);
      } else if (j->first < i->first) {
        out.entries_.push_back(*j++);
      } else {
        out.entries_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    out.entries_.insert(out.entries_.end(), i, a.entries_.end());
    out.entries_.insert(out.entries_.end(), j, b.entries_.end());
    return out;
  }

  /// Applies a slot map, merging slots that land on the same target.
  template <typename SlotMap>
  Monomial remapped(SlotMap&& map) const {
    Monomial out;
    for (const auto& [s, e] : entries_) out.entries_.emplace_back(map(s), e);
    std::sort(out.entries_.begin(), out.entries_.end());
    std::vector<Entry> merged;
    for (const auto& entry : out.entries_) {
      if (!merged.empty() && merged.back().first == entry.first) {
        merged.back().second += entry.second;
      } else {
        merged.push_back(entry);
      }
    }
    out.entries_ = std::move(merged);
    return out;
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Entry> entries_;
};

struct Term {
  Monomial monomial;
  Coefficient coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial with positive integer coefficients, terms kept sorted by monomial.
class Polynomial {
 public:
  explicit Polynomial(Mode mode) : mode_(mode) {}

  static Polynomial variable(Mode mode, slot::Index s) {
    Polynomial p(mode);
    p.terms_.push_back(Term{Monomial::variable(s), 1});
    return p;
  }

  static Polynomial from_terms(Mode mode, std::vector<Term> terms) {
    Polynomial p(mode);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  Mode mode() const noexcept { return mode_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += " + ";
      if (t.coefficient != 1 || t.monomial.empty()) out += t.coefficient.str();
      for (const auto& [s, e] : t.monomial.entries()) {
        out += slot_name(s);
        if (e != 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

 private:
  friend Polynomial add(const Polynomial&, const Polynomial&);
  friend Polynomial multiply(const Polynomial&, const Polynomial&);

  std::string slot_name(slot::Index s) const {
    if (mode_ == Mode::Unlabeled) return s == slot::kUnlabeledX ? "x" : "y";
    return s < kRelationCount ? "x" + std::to_string(s + 1)
                              : "y" + std::to_string(s - kRelationCount + 1);
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().monomial == t.monomial) {
        merged.back().coefficient += t.coefficient;
      } else {
        merged.push_back(std::move(t));
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coefficient == 0; });
    terms_ = std::move(merged);
  }

  Mode mode_;
  std::vector<Term> terms_;
};

inline void require_same_mode(const Polynomial& p, const Polynomial& q) {
  if (p.mode() != q.mode()) {
    throw Error(ErrorKind::ModeMismatch, "labeled and unlabeled polynomials cannot be combined");
  }
}

inline Polynomial add(const Polynomial& p, const Polynomial& q) {
  require_same_mode(p, q);
  Polynomial out(p.mode());
  out.terms_.reserve(p.size() + q.size());
  auto i = p.terms_.begin();
  auto j = q.terms_.begin();
  while (i != p.terms_.end() && j != q.terms_.end()) {
    if (i->monomial < j->monomial) {
      out.terms_.push_back(*i++);
    } else if (j->monomial < i->monomial) {
      out.terms_.push_back(*j++);
    } else {
      out.terms_.push_back(Term{i->monomial, i->coefficient + j->coefficient});
      ++i;
      ++j;
    }
  }
  out.terms_.insert(out.terms_.end(), i, p.terms_.end());
  out.terms_.insert(out.terms_.end(), j, q.terms_.end());
  return out;
}

inline Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  require_same_mode(p, q);
  Polynomial out(p.mode());
  out.terms_.reserve(p.size() * q.size());
  for (const auto& a : p.terms_) {
    for (const auto& b : q.terms_) {
      out.terms_.push_back(Term{a.monomial * b.monomial, a.coefficient * b.coefficient});
    }
  }
  out.normalize();
  return out;
}

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }

namespace detail {

template <typename LeafFn, typename InternalFn>
Polynomial fold_tree(const DepTree& tree, Mode mode, LeafFn leaf, InternalFn internal) {
  std::vector<Polynomial> at(tree.size(), Polynomial(mode));
  for (auto id : tree.post_order()) {
    const auto& node = tree.node(id);
    if (node.children.empty()) {
      at[id] = leaf(node.label);
      continue;
    }
    Polynomial product = std::move(at[node.children.front()]);
    for (std::size_t k = 1; k < node.children.size(); ++k) {
      product = multiply(product, at[node.children[k]]);
      at[node.children[k]] = Polynomial(mode);
    }
    at[id] = add(internal(node.label), product);
  }
  return std::move(at[tree.root()]);
}

}  // namespace detail

/// Leaf -> x; internal node -> y + product of its children's polynomials.
inline Polynomial compute_unlabeled(const DepTree& tree) {
  return detail::fold_tree(
      tree, Mode::Unlabeled,
      [](RelationIndex) { return Polynomial::variable(Mode::Unlabeled, slot::kUnlabeledX); },
      [](RelationIndex) { return Polynomial::variable(Mode::Unlabeled, slot::kUnlabeledY); });
}

/// Leaf labeled l -> x_l; internal node labeled l -> y_l + product over children.
inline Polynomial compute_labeled(const DepTree& tree) {
  return detail::fold_tree(
      tree, Mode::Labeled,
      [](RelationIndex l) { return Polynomial::variable(Mode::Labeled, slot::x(l)); },
      [](RelationIndex l) { return Polynomial::variable(Mode::Labeled, slot::y(l)); });
}

/// Substitutes x_i -> x and y_i -> y.
inline Polynomial collapse_labels(const Polynomial& p) {
  if (p.mode() != Mode::Labeled) {
    throw Error(ErrorKind::ModeMismatch, "collapse_labels expects a labeled polynomial");
  }
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    terms.push_back(Term{t.monomial.remapped([](slot::Index s) {
                           return s < kRelationCount ? slot::kUnlabeledX : slot::kUnlabeledY;
                         }),
                         t.coefficient});
  }
  return Polynomial::from_terms(Mode::Unlabeled, std::move(terms));
}

/// One term of a labeled polynomial in dense form:
/// [e_x1..e_x37, e_y1..e_y37, c].
struct TermVector {
  static constexpr std::size_t kExponents = slot::kLabeledCount;
  static constexpr std::size_t kWidth = kExponents + 1;

  std::array<std::uint32_t, kExponents> exponents{};
  Coefficient coefficient = 1;

  friend bool operator==(const TermVector&, const TermVector&) = default;
  friend bool operator<(const TermVector& a, const TermVector& b) {
    if (a.exponents != b.exponents) return a.exponents < b.exponents;
    return a.coefficient < b.coefficient;
  }
};

/// Dense term vectors in lexicographic order.
inline std::vector<TermVector> to_term_vectors(const Polynomial& p) {
  if (p.mode() != Mode::Labeled) {
    throw Error(ErrorKind::ModeMismatch, "term vectors are defined for labeled polynomials");
  }
  std::vector<TermVector> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    TermVector v;
    for (const auto& [s, e] : t.monomial.entries()) v.exponents[s] = e;
    v.coefficient = t.coefficient;
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Inverse of to_term_vectors.
inline Polynomial from_term_vectors(const std::vector<TermVector>& vectors) {
  std::vector<Term> terms;
  terms.reserve(vectors.size());
  for (const auto& v : vectors) {
    std::vector<Monomial::Entry> entries;
    for (std::size_t s = 0; s < TermVector::kExponents; ++s) {
      if (v.exponents[s] != 0) entries.emplace_back(static_cast<slot::Index>(s), v.exponents[s]);
    }
    Monomial m = Monomial::from_entries(std::move(entries));
    terms.push_back(Term{std::move(m), v.coefficient});
  }
  return Polynomial::from_terms(Mode::Labeled, std::move(terms));
}

/// One line of 75 space-separated integers per term vector.
inline void write_term_vectors(std::ostream& out, const std::vector<TermVector>& vectors) {
  for (const auto& v : vectors) {
    for (auto e : v.exponents) out << e << ' ';
    out << v.coefficient << '\n';
  }
}

/// Reads one term vector from a line written by write_term_vectors.
inline TermVector parse_term_vector(const std::string& line) {
  std::istringstream in(line);
  TermVector v;
  for (auto& e : v.exponents) {
    long long value = -1;
    if (!(in >> value) || value < 0) {
      throw Error(ErrorKind::MalformedLine, "term vector needs 75 non-negative integers");
    }
    e = static_cast<std::uint32_t>(value);
  }
  std::string coefficient;
  if (!(in >> coefficient)) throw Error(ErrorKind::MalformedLine, "term vector missing coefficient");
  try {
    v.coefficient = Coefficient(coefficient);
  } catch (const std::exception&) {
    throw Error(ErrorKind::MalformedLine, "bad coefficient '" + coefficient + "'");
  }
  std::string extra;
  if (v.coefficient < 1 || (in >> extra)) {
    throw Error(ErrorKind::MalformedLine, "term vector must hold 75 integers with coefficient >= 1");
  }
  return v;
}

}  // namespace synpoly
