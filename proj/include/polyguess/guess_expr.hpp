#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polyguess/rational.hpp"

namespace polyguess {

// Expression in the two bound indices (j = sequence index, i = summation
// index) used to rescale coefficients before the search.  Supported grammar:
//   expr    := ['-'] term (('+'|'-') term)*
//   term    := power (('*'|'/') power)*
//   power   := primary ('^' primary)?
//   primary := number | 'j' | 'i' | 'factorial' '(' expr ')' | '(' expr ')'
//   number  := integer ('/' integer)?
// Exponents must evaluate to integers; negative exponents need a nonzero
// base; factorial arguments must evaluate to nonnegative integers.
struct GuessExpr {
  enum class Kind { Number, IndexJ, IndexI, Add, Sub, Mul, Div, Pow, Factorial };

  Kind kind = Kind::Number;
  Rational value;                     // Number
  std::vector<GuessExpr> children;    // operators / factorial

  std::string text;  // original source, kept for provenance and reports
};

GuessExpr parse_guess_expr(const std::string& text);

// Exact evaluation at integer (j, i).  Throws DomainError for factorial of a
// negative value, division by zero, or a non-integer exponent.
Rational evaluate_guess_expr(const GuessExpr& expr, long j, long i);

}  // namespace polyguess
