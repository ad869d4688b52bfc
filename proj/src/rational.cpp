#include "sievesdp/rational.hpp"

#include <cctype>

#include "sievesdp/error.hpp"

namespace sievesdp {

namespace {

bool is_integer_text(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string strip_plus(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return std::string(s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto bad = [&] {
    return SieveError(ErrorCode::MalformedInput, "not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) throw bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den)) throw bad();
    Integer n(strip_plus(num)), d(strip_plus(den));
    if (d == 0) throw SieveError(ErrorCode::MalformedInput, "zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    if (!is_integer_text(digits)) throw bad();
    if (frac.empty()) throw bad();
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer f{std::string(frac)};
    Integer w{strip_plus(digits)};
    Integer num = abs(w) * scale + f;
    if (negative) num = -num;
    Rational q(num, scale);
    q.canonicalize();
    return q;
  }
  if (!is_integer_text(text)) throw bad();
  return Rational(Integer(strip_plus(text)));
}

std::string format_rational(const Rational& q) { return q.get_str(); }

double Scalar::to_double() const {
  if (const auto* d = std::get_if<double>(&value_)) return *d;
  return std::get<Rational>(value_).get_d();
}

Rational Scalar::to_rational() const {
  if (const auto* d = std::get_if<double>(&value_)) return Rational(*d);
  return std::get<Rational>(value_);
}

bool Scalar::is_negative() const {
  if (const auto* d = std::get_if<double>(&value_)) return *d < 0;
  return sgn(std::get<Rational>(value_)) < 0;
}

}  // namespace sievesdp
