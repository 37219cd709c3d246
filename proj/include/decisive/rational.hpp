#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace decisive {

// Exact arbitrary-precision rationals. GMP keeps every mpq_class value in
// canonical form (positive denominator, coprime parts) after each operation;
// values built from raw parts go through make_rational, which canonicalizes.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(const Integer& num, const Integer& den);

// Accepts "n", "n/d" and plain decimals such as "0.25". Throws
// Error(InvalidArgument) on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

// Always "num/den", also for integers ("3/1").
std::string to_fraction(const Rational& q);

// Decimal rendering rounded toward zero with the given number of digits after
// the point. Only for display.
std::string to_decimal(const Rational& q, int digits = 12);

Rational pow(const Rational& base, unsigned long exponent);

std::size_t hash_value(const Rational& q);

inline bool is_probability(const Rational& q) { return q >= 0 && q <= 1; }

}  // namespace decisive
