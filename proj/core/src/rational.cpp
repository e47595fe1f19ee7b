#include "optauction/rational.hpp"

#include <cctype>
#include <string>

#include "optauction/error.hpp"

namespace optauction {
namespace {

bool all_digits(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw DomainError("malformed rational '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos
                              ? std::string_view{}
                              : body.substr(dot + 1);
  if (whole.empty() && frac.empty()) malformed(text);
  if (!whole.empty() && !all_digits(whole)) malformed(text);
  if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) {
    malformed(text);
  }
  std::string digits(whole);
  digits += frac;
  if (digits.empty()) malformed(text);
  mpz_class numerator(digits, 10);
  mpz_class denominator;
  mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac.size());
  Rational value(numerator, denominator);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) malformed(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);

  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  std::string_view num_digits = num;
  if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
    num_digits.remove_prefix(1);
  }
  if (!all_digits(num_digits) || !all_digits(den)) malformed(text);
  mpz_class denominator(std::string(den), 10);
  if (denominator == 0) {
    throw DomainError("zero denominator in '" + std::string(text) + "'");
  }
  std::string numerator_text(num.front() == '+' ? num.substr(1) : num);
  Rational value(mpz_class(numerator_text, 10), denominator);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // Round half away from zero at the requested precision.
  Rational scaled = abs(value) * scale;
  mpz_class rounded = (scaled.get_num() * 2 + scaled.get_den()) /
                      (scaled.get_den() * 2);
  std::string text = rounded.get_str();
  if (digits > 0) {
    if (text.size() <= static_cast<std::size_t>(digits)) {
      text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
    }
    text.insert(text.size() - static_cast<std::size_t>(digits), ".");
  }
  if (sgn(value) < 0 && rounded != 0) text.insert(0, "-");
  return text;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

mpz_class common_denominator(std::span<const Rational> values) {
  mpz_class result = 1;
  for (const auto& v : values) {
    mpz_lcm(result.get_mpz_t(), result.get_mpz_t(), v.get_den_mpz_t());
  }
  return result;
}

Rational ratio(long p, long q) {
  if (q == 0) throw DomainError("zero denominator");
  Rational value(p, q);
  value.canonicalize();
  return value;
}

}  // namespace optauction
