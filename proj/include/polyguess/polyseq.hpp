#pragma once

#include <string>
#include <vector>

#include "polyguess/guess_expr.hpp"
#include "polyguess/poly.hpp"

namespace polyguess {

// One normalization step applied to a sequence before searching.  The chain
// is carried along so results can state which sequence the formula is for.
struct TransformRecord {
  std::string kind;                    // "clear_lcm", "exponential", "user_guess", "change_basis"
  std::string detail;                  // mode / expression text
  std::vector<std::string> multipliers;  // per-polynomial scale, when meaningful

  bool operator==(const TransformRecord& rhs) const {
    return kind == rhs.kind && detail == rhs.detail && multipliers == rhs.multipliers;
  }
};

// The first several polynomials of a sequence, p_{start_index}, ..., in one
// shared variable.  Individual all-zero polynomials are allowed; a sequence
// of nothing but zeros is rejected where it matters (the search).
struct PolySeq {
  std::vector<Poly> polys;
  long start_index = 1;
  std::string var;
  std::vector<TransformRecord> provenance;

  std::size_t size() const { return polys.size(); }
  long index_of(std::size_t row) const { return start_index + static_cast<long>(row); }
  void validate() const;  // non-empty, consistent variable, start_index >= 0
};

PolySeq make_polyseq(std::vector<Poly> polys, long start_index);

enum class ExpNormalizeMode { ByJFactorial, ByIFactorial, ByBoth };

// Multiplies each p_j by the least common multiple of its coefficient
// denominators, making coefficients integral.  Multipliers are recorded in
// the returned sequence's provenance (and returned for direct inspection).
std::pair<PolySeq, std::vector<Int>> clear_denominators_lcm(const PolySeq& seq);

// Exponential-generating-function style rescaling: coefficient c_{j,i} is
// multiplied by j!, i!, or both.
PolySeq normalize_exponential(const PolySeq& seq, ExpNormalizeMode mode);

// Multiplies every coefficient c_{j,i} by u(j, i).  u must be evaluable at
// each (j, i) with a nonzero coefficient.
PolySeq apply_user_guess(const PolySeq& seq, const GuessExpr& u);

// Exact change of basis between monomial powers x^k and falling factorials
// x^(k) = x(x-1)...(x-k+1).  Coefficient vectors are lowest-order first.
std::vector<Rational> change_basis_monomial_to_falling(const std::vector<Rational>& coeffs);
std::vector<Rational> change_basis_falling_to_monomial(const std::vector<Rational>& coeffs);

}  // namespace polyguess
