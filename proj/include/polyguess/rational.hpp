#pragma once

#include <gmpxx.h>

#include <string>

#include "polyguess/common.hpp"

namespace polyguess {

// All arithmetic in the library is exact.  GMP supplies the arbitrary
// precision integer and rational types; everything else builds on these.
using Int = mpz_class;
using Rational = mpq_class;

inline int sign_of(const Int& v) { return sgn(v); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Exact division helpers.  divides(a, b) asks whether a | b.
inline bool divides(const Int& a, const Int& b) {
  return mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0;
}

inline Int div_exact(const Int& value, const Int& divisor) {
  Int out;
  mpz_divexact(out.get_mpz_t(), value.get_mpz_t(), divisor.get_mpz_t());
  return out;
}

inline Int factorial(long n) {
  if (n < 0) throw DomainError("factorial of negative argument " + std::to_string(n));
  Int out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

inline Int binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return Int(0);
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// base^exp for rational base and any integer exponent; negative exponents
// require a nonzero base.
inline Rational pow_rational(const Rational& base, long exp) {
  if (exp == 0) return Rational(1);
  if (base == 0) {
    if (exp < 0) throw DomainError("zero raised to a negative power");
    return Rational(0);
  }
  Rational b = base;
  unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), b.get_den_mpz_t(), e);
  out.canonicalize();
  if (exp < 0) out = Rational(1) / out;
  return out;
}

inline std::string to_string(const Int& v) { return v.get_str(); }

// Canonical text form: "num" for integers, "num/den" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Int parse_int(const std::string& text) {
  try {
    return Int(text);
  } catch (const std::invalid_argument&) {
    throw ParseError("not an integer: '" + text + "'");
  }
}

// Accepts "num" or "num/den"; denominator must be nonzero.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw DomainError("rational with zero denominator: '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational: '" + text + "'");
  }
}

}  // namespace polyguess
