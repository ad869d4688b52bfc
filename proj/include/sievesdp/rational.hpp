#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace sievesdp {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "a", "a/b", or a plain decimal such as "-0.25". Throws
/// SieveError(MalformedInput) on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text form: "40/3", "-1/2", "7".
std::string format_rational(const Rational& q);

/// num/den in canonical form.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational exact_from_double(double v) { return Rational(v); }

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

/// A scalar that is either an exact rational or a float64. Certificate
/// quantities keep whichever form they were produced in.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(double v) : value_(v) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  double to_double() const;
  /// Exact value; for a float this is the exact binary value of the double.
  Rational to_rational() const;

  bool is_negative() const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.value_ == b.value_;
  }

 private:
  std::variant<double, Rational> value_;
};

}  // namespace sievesdp
