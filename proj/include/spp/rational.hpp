#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spp {

// Exact rational number; GMP keeps it in lowest terms after every operation.
using Rational = mpq_class;

// num/den in lowest terms. Throws std::invalid_argument on a zero denominator.
Rational ratio(long num, long den);

// Parses "p/q" or "p" (optional sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

// Decimal with the given number of significant digits.
std::string to_decimal(const Rational& value, int significant_digits = 12);

Rational pow(const Rational& base, unsigned exponent);

// Smallest L >= 0 with base^L >= value. Requires base > 1 and value > 0.
unsigned ceil_log(const Rational& value, const Rational& base);

// Largest L >= 0 with base^L <= value, or 0 when value < 1.
unsigned floor_log(const Rational& value, const Rational& base);

// H_m = 1 + 1/2 + ... + 1/m.
Rational harmonic_number(unsigned m);

Rational sum(const std::vector<Rational>& values);

}  // namespace spp
