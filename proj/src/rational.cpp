#include "spp/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace spp {

namespace {

bool is_integer_literal(std::string_view text) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view text) {
  if (!is_integer_literal(text)) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return mpz_class(digits, 10);
}

}  // namespace

Rational ratio(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  mpz_class num = parse_integer(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  mpz_class den = parse_integer(den_text);
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

std::string to_decimal(const Rational& value, int significant_digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant_digits, value.get_d());
  return buffer;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

unsigned ceil_log(const Rational& value, const Rational& base) {
  if (base <= 1 || value <= 0) throw std::invalid_argument("ceil_log needs base > 1 and value > 0");
  unsigned l = 0;
  Rational power(1);
  while (power < value) {
    power *= base;
    ++l;
  }
  return l;
}

unsigned floor_log(const Rational& value, const Rational& base) {
  if (base <= 1) throw std::invalid_argument("floor_log needs base > 1");
  unsigned l = 0;
  Rational power = base;
  while (power <= value) {
    power *= base;
    ++l;
  }
  return l;
}

Rational harmonic_number(unsigned m) {
  Rational h(0);
  for (unsigned a = 1; a <= m; ++a) h += ratio(1, static_cast<long>(a));
  return h;
}

Rational sum(const std::vector<Rational>& values) {
  Rational total(0);
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace spp
