#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace synpoly {

// Expression templates off: every arithmetic result is a plain value.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                                   boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

inline Rational make_rational(const Integer& num, const Integer& den) { return Rational(num, den); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// `num/den` in lowest terms.
inline std::string to_exact_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

/// Decimal rendering with `digits` fractional digits, rounding half up.
inline std::string format_fixed(const Rational& q, int digits = 2) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational shifted = q * scale + Rational(1, 2);
  // floor, valid for negative values too
  Integer num = boost::multiprecision::numerator(shifted);
  Integer den = boost::multiprecision::denominator(shifted);
  Integer fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;

  bool negative = fl < 0;
  if (negative) fl = -fl;
  Integer whole = fl / scale;
  Integer frac = fl % scale;
  std::string out = (negative ? "-" : "") + whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += '.' + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

/// Exact sum of fractions. Numerators are grouped by denominator so that
/// adding many fractions with few distinct denominators stays cheap; the
/// result does not depend on the order of additions.
class RationalSum {
 public:
  void add(const Integer& numerator, const Integer& denominator) {
    by_denominator_[denominator] += numerator;
  }
  void add(const Rational& q) {
    add(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
  }
  void merge(const RationalSum& other) {
    for (const auto& [den, num] : other.by_denominator_) by_denominator_[den] += num;
  }

  Rational total() const {
    Rational sum = 0;
    for (const auto& [den, num] : by_denominator_) sum += Rational(num, den);
    return sum;
  }

 private:
  std::map<Integer, Integer> by_denominator_;
};

}  // namespace synpoly
