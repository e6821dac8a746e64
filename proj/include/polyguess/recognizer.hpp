#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyguess/rational.hpp"

namespace polyguess {

// Integer affine form a*m + b in a single index m.
struct AffineForm {
  long slope = 0;
  long offset = 0;

  long at(long m) const { return slope * m + offset; }
  bool operator==(const AffineForm& rhs) const {
    return slope == rhs.slope && offset == rhs.offset;
  }
};

// Closed form of a one-index remainder sequence.  FactorialOf slopes are
// limited to {-1, 0, 1}; `reciprocal` marks 1/(arg)! (needed for forms such
// as 2^m / m!).
struct ClosedForm {
  enum class Kind { Const, PolyInIndex, Geometric, FactorialOf, SignAlt, Product };

  Kind kind = Kind::Const;
  Rational constant = Rational(1);   // Const
  std::vector<Rational> poly;        // PolyInIndex: coefficients in m, ascending
  Rational base;                     // Geometric
  AffineForm arg;                    // Geometric exponent / FactorialOf / SignAlt
  bool reciprocal = false;           // FactorialOf only
  std::vector<ClosedForm> factors;   // Product

  static ClosedForm one() { return ClosedForm{}; }
  static ClosedForm make_const(const Rational& c);
  bool is_const_one() const { return kind == Kind::Const && constant == 1; }

  // Structural size used for ranking ("fewest nodes wins").
  int node_count() const;
  int total_degree() const;
  bool operator==(const ClosedForm& rhs) const;
};

// Exact evaluation at index m.  Throws DomainError when a factorial argument
// is negative.
Rational evaluate_closed_form(const ClosedForm& form, long m);

// Compact structural key (stable across runs); used for deduplication and
// deterministic ordering.
std::string closed_form_key(const ClosedForm& form);

struct RecognizerOptions {
  int max_ratio_degree = 2;   // numerator/denominator degree cap for ratio fits
  int max_poly_degree = 10;   // cap for the finite-difference stage
  int max_results = 8;
};

// Attempts to recognize values v_start, v_{start+1}, ... as a ClosedForm.
// Returns all verified candidates ranked by (node count, total degree); every
// returned form reproduces every input value exactly.  Empty when nothing
// matches.
std::vector<ClosedForm> recognize_sequence(const std::vector<Rational>& values, long start,
                                           const RecognizerOptions& opts = {});

// Integer-coefficient polynomial in the sequence index j, degree <= 2.
struct IndexPoly {
  long c0 = 0, c1 = 0, c2 = 0;

  long at(long j) const { return c0 + c1 * j + c2 * j * j; }
  int degree() const { return c2 != 0 ? 2 : (c1 != 0 ? 1 : 0); }
  bool operator==(const IndexPoly& rhs) const {
    return c0 == rhs.c0 && c1 == rhs.c1 && c2 == rhs.c2;
  }
  static IndexPoly constant(long c) { return {c, 0, 0}; }
};

// Minimal-degree (<= 2) integer polynomial through all points, or nullopt if
// none exists.  Points may arrive in any order; duplicate j with equal values
// collapse, conflicting duplicates raise InputError.  At least two points are
// required.
std::optional<IndexPoly> fit_index_function(const std::vector<std::pair<long, long>>& points);

}  // namespace polyguess
