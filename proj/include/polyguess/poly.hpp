#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyguess/rational.hpp"

namespace polyguess {

// Univariate polynomial with exact rational coefficients.  The variable name
// is part of the value; zero coefficients are never stored.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::string var) : var_(std::move(var)) {}
  Poly(std::string var, const Rational& constant);

  // Coefficient list, lowest degree first.
  static Poly from_coefficients(std::string var, const std::vector<Rational>& coeffs);

  const std::string& var() const { return var_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is -1 by convention here.
  long degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }
  Rational coefficient(long exponent) const;
  void set_coefficient(long exponent, const Rational& value);
  const std::map<long, Rational>& coefficients() const { return coeffs_; }
  std::vector<Rational> dense_coefficients() const;  // 0..degree, empty if zero

  bool integer_coefficients() const;

  Poly operator+(const Poly& rhs) const;
  Poly operator-(const Poly& rhs) const;
  Poly operator*(const Poly& rhs) const;
  Poly operator*(const Rational& scalar) const;
  bool operator==(const Poly& rhs) const;
  bool operator!=(const Poly& rhs) const { return !(*this == rhs); }

  Rational evaluate(const Rational& x) const;

  // Canonical text form, ascending exponents: "1 - 3*n + 2*n^2".
  std::string to_string() const;

 private:
  void check_same_var(const Poly& rhs) const;

  std::string var_;
  std::map<long, Rational> coeffs_;
};

// Parses the polynomial grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*'? factor)*
//   factor := atom ('^' uint)?
//   atom   := integer | integer '/' integer | var | '(' expr ')'
// Powers apply to plain atoms only; "(1-z)^2" is rejected (callers expand
// such products themselves, e.g. by writing "(1-z)*(1-z)").  Unary minus is
// accepted at the head of an expression and directly after '('.
Poly parse_poly(const std::string& text, const std::string& var);

}  // namespace polyguess
