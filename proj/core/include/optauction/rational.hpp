#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace optauction {

using Rational = mpq_class;

// Parses "p/q", an integer, or a terminating decimal ("0.6", "-1.25") into
// an exact rational. Throws DomainError on malformed text or a zero
// denominator.
Rational parse_rational(std::string_view text);

// p / q in lowest terms. DomainError when q is zero.
Rational ratio(long p, long q);

// Canonical exact rendering: "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& value);

// Fixed-point approximation with `digits` fractional digits. Only used for
// human-facing reports.
std::string to_decimal(const Rational& value, int digits = 6);

double to_double(const Rational& value);

Rational sum(std::span<const Rational> values);

// Least common multiple of the denominators.
mpz_class common_denominator(std::span<const Rational> values);

}  // namespace optauction
