#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyguess/factorizer.hpp"
#include "polyguess/polyseq.hpp"
#include "polyguess/recognizer.hpp"
#include "polyguess/triangles.hpp"

namespace polyguess {

// Per-slot index slopes (u, l): the factor for slot t at term i of row j is
// Triangle_t[ub_t(j) + u_t * i, lb_t(j) + l_t * i].
struct SlotSlopes {
  long u = 0;
  long l = 0;

  bool operator==(const SlotSlopes& rhs) const { return u == rhs.u && l == rhs.l; }
};
using SlopeTuple = std::vector<SlotSlopes>;

struct SearchOptions {
  std::vector<TriangleSpec> sequence_factors;

  // Rows materialized per triangle.  Candidates whose indices would leave
  // this band are pruned (reported as range-pruned), so enlarging it can only
  // add formulas.
  int triangular_sequence_num_rows = 12;

  // Slope values tried per slot bound; the template enumeration is the cross
  // product unless explicit pairs are given.
  std::vector<long> index_multiples = {0, 1};

  // Explicit (u, l) tuples, one entry per slot, overriding the cross product.
  std::optional<std::vector<SlopeTuple>> index_offset_pairs;

  // Summation upper limit offset j0 (terms run i = 0..j+j0).  Unset probes
  // 0, 1, 2 in order.
  std::optional<long> index_offset;

  int min_terms_warn = 6;

  // Positions taken per divisor class during factor enumeration.
  int per_slot_factor_cap = 64;

  // Formulas kept after ranking.
  int result_cap = 32;

  // Wall-clock budget per template candidate; 0 means unlimited.  Exceeding
  // the budget abandons the candidate and is reported distinctly from "no
  // match".
  long budget_ms_per_template = 10000;

  // Template candidates are independent; more than one worker evaluates them
  // in parallel with results merged in enumeration order, so the output is
  // identical for any worker count.
  int num_workers = 1;

  RecognizerOptions recognizer;
};

// One triangle factor of a formula: Triangle[upper(j) + u*i, lower(j) + l*i].
struct FactorTemplate {
  TriangleSpec triangle;
  IndexPoly upper;
  long upper_slope = 0;
  IndexPoly lower;
  long lower_slope = 0;

  bool operator==(const FactorTemplate& rhs) const {
    return triangle == rhs.triangle && upper == rhs.upper && upper_slope == rhs.upper_slope &&
           lower == rhs.lower && lower_slope == rhs.lower_slope;
  }
};

struct FormulaNames {
  std::string sequence_index = "j";
  std::string summation_index = "i";
  std::string variable = "x";
};

// A verified closed form:
//   p_j(x) = sum_{i=0}^{j+j0} (prod_t Triangle_t[...]) * rs1(i) * rs2(j+j0-i) * x^i
// At least one of rs1/rs2 is the constant 1.
struct Formula {
  std::vector<FactorTemplate> factors;
  ClosedForm rs1 = ClosedForm::one();  // in the summation index i
  ClosedForm rs2 = ClosedForm::one();  // in j + j0 - i
  long j0 = 0;
  int num_rows = 12;  // table size the formula was verified against
  FormulaNames names;
  std::vector<TransformRecord> normalization;
};

struct SearchDiagnostics {
  bool budget_exceeded = false;
  bool range_pruned = false;
  std::vector<std::string> warnings;
  // Remainder value sequences that passed consistency but resisted
  // recognition; kept for reporting (and the optional OEIS lookup).
  std::vector<std::vector<Int>> unrecognized_remainders;
};

struct GuessResult {
  std::vector<Formula> formulas;
  SearchDiagnostics diagnostics;
};

// Template enumeration.  The tuple stream is either the explicit
// index_offset_pairs list (in order) or the cross product of index_multiples
// with itself, per slot, ordered with the leftmost slot most significant and
// (u, l) pairs in list order.  For a single slot the all-zero pair is skipped
// when the coefficients vary with i (the factor would carry no i-dependence).
std::vector<SlopeTuple> enumerate_templates(const SearchOptions& opts, bool i_varying);

// Runs one slope tuple through the pipeline: per-row factor decompositions,
// cross-row index fits, remainder splitting/recognition, exact verification.
// Probes j0 from opts (the explicit index_offset, else 0, 1, 2) and tries
// both remainder assignments, returning every verified variant ordered by
// (complexity, j0, structural key).
std::vector<Formula> search_with_template(const PolySeq& seq, const SlopeTuple& slopes,
                                          const std::vector<std::shared_ptr<const TriangleTable>>& tables,
                                          const SearchOptions& opts, SearchDiagnostics& diag);

// Full search over all template candidates and j0 probes.
GuessResult guess_polynomial_sequence(const PolySeq& seq, const SearchOptions& opts);

// Exact check of a formula against a sequence.  Any triangle reference at or
// beyond the formula's num_rows counts as failure (never as an exception), as
// does a remainder evaluation error inside a contributing term.
bool verify_formula(const Formula& formula, const PolySeq& seq);
bool verify_formula(const Formula& formula, const PolySeq& seq, TableCache& cache);

// Evaluates the formula's polynomial for one index, growing tables as needed
// (used to extrapolate beyond the searched range).
Poly formula_polynomial(const Formula& formula, long j, TableCache& cache);

}  // namespace polyguess
