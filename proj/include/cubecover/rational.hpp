#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cubecover/error.hpp"

namespace cubecover {

/// Exact rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Parses `[+-]digits[/digits]`. Throws ParseError (with `line`) on anything else.
inline Rational parse_rational(std::string_view text, std::size_t line = 0) {
  auto fail = [&](const char* why) {
    throw ParseError(line, std::string(why) + " in rational '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::string& out) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    out.assign(text.substr(start, i - start));
    return i > start;
  };
  std::string num, den = "1";
  if (!digits(num)) fail("expected digits");
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!digits(den)) fail("expected denominator digits");
  }
  if (i != text.size()) fail("trailing characters");
  Integer n(num, 10), d(den, 10);
  if (d == 0) fail("zero denominator");
  Rational q(negative ? Integer(-n) : n, d);
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& q) { return q.get_str(10); }

/// Decimal rendering for --approx output only; never used in computation.
inline std::string format_approx(const Rational& q, int digits = 6) {
  mpf_class f(q, 128);
  mp_exp_t exp = 0;
  std::string s = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (s.empty()) return "0";
  bool neg = s[0] == '-';
  if (neg) s.erase(0, 1);
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + s;
  } else if (static_cast<std::size_t>(exp) >= s.size()) {
    out = s + std::string(static_cast<std::size_t>(exp) - s.size(), '0');
  } else {
    out = s.substr(0, static_cast<std::size_t>(exp)) + "." + s.substr(static_cast<std::size_t>(exp));
  }
  return neg ? "-" + out : out;
}

/// Comma- or whitespace-separated list of rationals.
inline std::vector<Rational> parse_rational_list(std::string_view text, std::size_t line = 0) {
  std::vector<Rational> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && text[i] != ',' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    out.push_back(parse_rational(text.substr(start, i - start), line));
  }
  return out;
}

}  // namespace cubecover
