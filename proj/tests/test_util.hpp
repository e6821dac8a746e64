#pragma once

// Shared helpers for the test suite: independent combinatorial oracles (never
// routed through the library's triangle builder), fixture sequences, a random
// formula generator for round-trip checks, and a small CLI runner.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polyguess/poly.hpp"
#include "polyguess/polyseq.hpp"
#include "polyguess/search.hpp"

namespace testutil {

using namespace polyguess;

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

// Unsigned Stirling numbers of the first kind: cycle-count histogram over all
// permutations of {0..n-1}.
inline std::vector<std::vector<long>> stirling1_rows_oracle(int max_n) {
  std::vector<std::vector<long>> rows(static_cast<std::size_t>(max_n) + 1);
  rows[0] = {1};
  for (int n = 1; n <= max_n; ++n) {
    rows[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      int cycles = 0;
      for (int at = 0; at < n; ++at) {
        if (seen[static_cast<std::size_t>(at)]) continue;
        ++cycles;
        for (int walk = at; !seen[static_cast<std::size_t>(walk)];
             walk = perm[static_cast<std::size_t>(walk)])
          seen[static_cast<std::size_t>(walk)] = true;
      }
      ++rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(cycles)];
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return rows;
}

// Stirling numbers of the second kind: exhaustive set-partition enumeration
// (each element joins an existing block or opens a new one).
inline std::vector<std::vector<long>> stirling2_rows_oracle(int max_n) {
  std::vector<std::vector<long>> rows(static_cast<std::size_t>(max_n) + 1);
  rows[0] = {1};
  for (int n = 1; n <= max_n; ++n) {
    auto& row = rows[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    // restricted growth strings: assign[t] <= 1 + max(assign[0..t-1])
    std::function<void(int, int)> rec = [&](int at, int blocks) {
      if (at == n) {
        ++row[static_cast<std::size_t>(blocks)];
        return;
      }
      for (int b = 0; b <= blocks; ++b) {
        assign[static_cast<std::size_t>(at)] = b;
        rec(at + 1, std::max(blocks, b + 1));
      }
    };
    rec(0, 0);
  }
  return rows;
}

// First-order Eulerian numbers: ascent-count histogram over all permutations.
inline std::vector<std::vector<long>> eulerian_rows_oracle(int max_n) {
  std::vector<std::vector<long>> rows(static_cast<std::size_t>(max_n) + 1);
  rows[0] = {1};
  for (int n = 1; n <= max_n; ++n) {
    rows[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int ascents = 0;
      for (int at = 0; at + 1 < n; ++at)
        if (perm[static_cast<std::size_t>(at)] < perm[static_cast<std::size_t>(at) + 1]) ++ascents;
      ++rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(ascents)];
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return rows;
}

// Second-order Eulerian numbers: ascent-count histogram over all Stirling
// permutations of the multiset {1,1,2,2,...,n,n} (built by inserting each new
// adjacent pair into every gap, which preserves the "between equal values only
// larger values" property).
inline std::vector<std::vector<long>> eulerian2_rows_oracle(int max_n) {
  std::vector<std::vector<long>> rows(static_cast<std::size_t>(max_n) + 1);
  rows[0] = {1};
  std::vector<std::vector<int>> perms = {{}};
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::vector<int>> next;
    for (const auto& perm : perms) {
      for (std::size_t gap = 0; gap <= perm.size(); ++gap) {
        std::vector<int> grown(perm.begin(), perm.begin() + static_cast<long>(gap));
        grown.push_back(n);
        grown.push_back(n);
        grown.insert(grown.end(), perm.begin() + static_cast<long>(gap), perm.end());
        next.push_back(std::move(grown));
      }
    }
    perms = std::move(next);
    auto& row = rows[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& perm : perms) {
      int ascents = 0;
      for (std::size_t at = 0; at + 1 < perm.size(); ++at)
        if (perm[at] < perm[at + 1]) ++ascents;
      ++row[static_cast<std::size_t>(ascents)];
    }
  }
  return rows;
}

// Binomial coefficients: popcount histogram over all subsets of an n-set.
inline std::vector<std::vector<long>> binomial_rows_oracle(int max_n) {
  std::vector<std::vector<long>> rows(static_cast<std::size_t>(max_n) + 1);
  for (int n = 0; n <= max_n; ++n) {
    auto& row = rows[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n) + 1, 0);
    for (unsigned long mask = 0; mask < (1ul << n); ++mask)
      ++row[static_cast<std::size_t>(__builtin_popcountl(mask))];
  }
  return rows;
}

// S2(n, k) by the explicit inclusion-exclusion sum; usable far beyond the
// enumeration oracle's range.
inline Int stirling2_value(long n, long k) {
  if (k < 0 || k > n) return Int(0);
  Int acc(0);
  for (long t = 0; t <= k; ++t) {
    Int pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(k - t),
                  static_cast<unsigned long>(n));
    Int term = binomial(k, t) * pw;
    if (t % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return div_exact(acc, factorial(k));
}

// ---------------------------------------------------------------------------
// Fixture sequences
// ---------------------------------------------------------------------------

inline Poly var_poly(const std::string& var) { return parse_poly(var, var); }

// p_j = n(n-1)...(n-j+1), j = 1..count.
inline PolySeq falling_seq(int count, const std::string& var = "n") {
  std::vector<Poly> polys;
  for (long j = 1; j <= count; ++j) {
    Poly p(var, Rational(1));
    for (long t = 0; t < j; ++t) p = p * (var_poly(var) - Poly(var, Rational(t)));
    polys.push_back(std::move(p));
  }
  return make_polyseq(std::move(polys), 1);
}

// p_j = (n+1)(n+2)...(n+j), j = 1..count.
inline PolySeq rising_seq(int count, const std::string& var = "n") {
  std::vector<Poly> polys;
  for (long j = 1; j <= count; ++j) {
    Poly p(var, Rational(1));
    for (long t = 1; t <= j; ++t) p = p * (var_poly(var) + Poly(var, Rational(t)));
    polys.push_back(std::move(p));
  }
  return make_polyseq(std::move(polys), 1);
}

inline PolySeq seq_from_rows(const std::vector<std::vector<long>>& rows, long start,
                             const std::string& var) {
  std::vector<Poly> polys;
  for (const auto& row : rows) {
    std::vector<Rational> coeffs;
    for (long c : row) coeffs.emplace_back(c);
    polys.push_back(Poly::from_coefficients(var, coeffs));
  }
  return make_polyseq(std::move(polys), start);
}

// Ascent-polynomial numerators, rows 1..count of the first-order triangle.
inline PolySeq eulerian_numerators_seq(int count, const std::string& var = "z") {
  auto rows = eulerian_rows_oracle(count);
  std::vector<std::vector<long>> picked(rows.begin() + 1, rows.begin() + 1 + count);
  return seq_from_rows(picked, 1, var);
}

// Bell polynomials: row j of the second-kind triangle as coefficients.
inline PolySeq bell_seq(int count, const std::string& var = "x") {
  auto rows = stirling2_rows_oracle(count);
  std::vector<std::vector<long>> picked(rows.begin() + 1, rows.begin() + 1 + count);
  return seq_from_rows(picked, 1, var);
}

// p_d = sum_i C(d,i)^2 (d-i)! w^i, d = 1..count.
inline PolySeq binom_squared_seq(int count, const std::string& var = "w") {
  std::vector<Poly> polys;
  for (long d = 1; d <= count; ++d) {
    std::vector<Rational> coeffs;
    for (long i = 0; i <= d; ++i) {
      Int b = binomial(d, i);
      coeffs.emplace_back(b * b * factorial(d - i));
    }
    polys.push_back(Poly::from_coefficients(var, coeffs));
  }
  return make_polyseq(std::move(polys), 1);
}

// p_j = sum_k C(j,k)^2 z^k, j = 1..count.
inline PolySeq legendre_sums_seq(int count, const std::string& var = "z") {
  std::vector<Poly> polys;
  for (long j = 1; j <= count; ++j) {
    std::vector<Rational> coeffs;
    for (long k = 0; k <= j; ++k) {
      Int b = binomial(j, k);
      coeffs.emplace_back(b * b);
    }
    polys.push_back(Poly::from_coefficients(var, coeffs));
  }
  return make_polyseq(std::move(polys), 1);
}

// The two derivative-polynomial families used as double-factor fixtures
// (degree parameter 5 and 4), indices m = 0..d-1.
inline PolySeq g5_seq(const std::string& var = "z") {
  return seq_from_rows({{1},
                        {-16, 10},
                        {72, -96, 35},
                        {-96, 216, -176, 50},
                        {24, -96, 144, -96, 24}},
                       0, var);
}

inline PolySeq g4_seq(const std::string& var = "z") {
  return seq_from_rows({{1}, {-9, 6}, {18, -27, 11}, {-6, 18, -18, 6}}, 0, var);
}

// Quadratic-upper-index fixture: coefficient i of p_j is S2(j^2 + i, j^2),
// j = 1..count; row j needs j^2 + j triangle rows to resolve.
inline PolySeq quad_upper_seq(int count, const std::string& var = "x") {
  std::vector<Poly> polys;
  for (long j = 1; j <= count; ++j) {
    std::vector<Rational> coeffs;
    for (long i = 0; i <= j; ++i) coeffs.emplace_back(stirling2_value(j * j + i, j * j));
    polys.push_back(Poly::from_coefficients(var, coeffs));
  }
  return make_polyseq(std::move(polys), 1);
}

// Rational EGF-style inputs: coefficient i of p_j is C(j,i)/i!, j = 1..count.
inline PolySeq egf_binomial_seq(int count, const std::string& var = "x") {
  std::vector<Poly> polys;
  for (long j = 1; j <= count; ++j) {
    std::vector<Rational> coeffs;
    for (long i = 0; i <= j; ++i) {
      Rational c(binomial(j, i));
      c /= Rational(factorial(i));
      coeffs.push_back(c);
    }
    polys.push_back(Poly::from_coefficients(var, coeffs));
  }
  return make_polyseq(std::move(polys), 1);
}

// ---------------------------------------------------------------------------
// Random single-factor formulas for the round-trip property
// ---------------------------------------------------------------------------

struct RoundTripCase {
  Formula formula;
  PolySeq seq;
};

// Draws one random single-factor formula (slopes in {-1,0,1}, affine index
// bounds with small nonnegative coefficients, one simple remainder) and
// evaluates its first `num_polys` polynomials.  Returns nullopt when the draw
// falls outside the searchable space: references past the 24-row band,
// remainder evaluation errors, fewer than 3 nonzero polynomials, or an
// i-dependent coefficient pattern with both slopes zero (which the template
// enumeration deliberately skips for a single factor).
inline std::optional<RoundTripCase> random_round_trip_case(std::mt19937& rng, TableCache& cache,
                                                           int num_polys = 7, int num_rows = 24) {
  static const BuiltinTriangle kBuiltins[] = {
      BuiltinTriangle::S1,    BuiltinTriangle::S1Signed, BuiltinTriangle::S2,
      BuiltinTriangle::E1,    BuiltinTriangle::E2,       BuiltinTriangle::Binom,
      BuiltinTriangle::Binom2, BuiltinTriangle::BinomSym};
  auto pick = [&rng](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
  };

  Formula f;
  f.num_rows = num_rows;
  FactorTemplate ft;
  ft.triangle = builtin_spec(kBuiltins[pick(0, 7)]);
  ft.upper_slope = pick(-1, 1);
  ft.lower_slope = pick(-1, 1);
  ft.upper = IndexPoly{pick(0, 4), pick(0, 2), 0};
  ft.lower = IndexPoly{pick(0, 2), pick(0, 1), 0};
  f.factors = {ft};

  // `need` is the shortest sample window from which the recognizer can still
  // identify the chosen remainder kind (constant 1, sign alternation 2,
  // geometric 3, linear polynomial / factorial ratio fit 4).
  ClosedForm cf = ClosedForm::one();
  int need = 1;
  switch (pick(0, 5)) {
    case 0:
      break;
    case 1:
      cf.kind = ClosedForm::Kind::SignAlt;
      cf.arg = {1, 0};
      need = 2;
      break;
    case 2:
      cf.kind = ClosedForm::Kind::FactorialOf;
      cf.arg = {1, pick(0, 1)};
      need = 4;
      break;
    case 3:
      cf.kind = ClosedForm::Kind::Geometric;
      cf.base = Rational(2);
      cf.arg = {1, 0};
      need = 3;
      break;
    case 4:
      cf.kind = ClosedForm::Kind::Const;
      cf.constant = Rational(pick(1, 3) * (pick(0, 1) ? 1 : -1));
      break;
    case 5:
      cf.kind = ClosedForm::Kind::PolyInIndex;
      cf.poly = {Rational(pick(1, 3)), Rational(pick(1, 2))};
      need = 4;
      break;
  }
  const bool on_rs1 = pick(0, 1) != 0;
  if (on_rs1)
    f.rs1 = cf;
  else
    f.rs2 = cf;

  const bool slopes_zero = ft.upper_slope == 0 && ft.lower_slope == 0;
  const bool remainder_const = cf.kind == ClosedForm::Kind::Const;
  if (slopes_zero && !remainder_const) return std::nullopt;

  // Every in-triangle reference for the observed rows must stay inside the
  // band the recovery search will build.
  for (long j = 1; j <= num_polys; ++j)
    for (long i = 0; i <= j; ++i) {
      long n = ft.upper.at(j) + ft.upper_slope * i;
      long k = ft.lower.at(j) + ft.lower_slope * i;
      if (n >= num_rows && k >= 0 && k <= n) return std::nullopt;
    }

  // The recovery search identifies the remainder from the leading contiguous
  // run of positions whose triangle entry is nonzero; a draw whose run is
  // shorter than `need` does not determine its own remainder and so is not a
  // valid round-trip witness.
  {
    auto table = cache.at_least(ft.triangle, num_rows);
    std::set<long> keys;
    for (long j = 1; j <= num_polys; ++j)
      for (long i = 0; i <= j; ++i) {
        long n = ft.upper.at(j) + ft.upper_slope * i;
        long k = ft.lower.at(j) + ft.lower_slope * i;
        if (n < 0 || k < 0 || k > n) continue;
        if (table->entry(n, k) == 0) continue;
        keys.insert(on_rs1 ? i : j - i);
      }
    if (keys.empty()) return std::nullopt;
    long run = 1;
    long expect = *keys.begin() + 1;
    for (auto it = std::next(keys.begin()); it != keys.end() && *it == expect;
         ++it, ++expect)
      ++run;
    if (run < need) return std::nullopt;
  }

  RoundTripCase out;
  out.formula = f;
  std::vector<Poly> polys;
  int nonzero = 0;
  try {
    for (long j = 1; j <= num_polys; ++j) {
      Poly p = formula_polynomial(f, j, cache);
      if (!p.is_zero()) ++nonzero;
      polys.push_back(std::move(p));
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  if (nonzero < 3) return std::nullopt;
  out.seq = make_polyseq(std::move(polys), 1);
  return out;
}

// ---------------------------------------------------------------------------
// CLI runner
// ---------------------------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

inline CliResult run_cli(const std::string& binary, const std::vector<std::string>& args) {
  std::string cmd = shell_quote(binary);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>&1";
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

inline std::string write_temp_file(const std::string& stem, const std::string& content) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    (stem + "_" + std::to_string(getpid()) + "_" + std::to_string(counter++) +
                     ".json");
  std::ofstream out(path);
  out << content;
  out.close();
  return path.string();
}

// Job document builder for CLI tests: polynomials given as coefficient rows.
inline std::string job_document(const std::string& var,
                                const std::vector<std::vector<std::string>>& rows,
                                const std::vector<std::string>& factors, long start_index = 1,
                                const std::string& extra_options = "") {
  std::ostringstream os;
  os << "{\n  \"format_version\": \"1\",\n  \"variable\": \"" << var << "\",\n";
  os << "  \"start_index\": " << start_index << ",\n  \"polynomials\": [";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << (r ? ", " : "") << "[";
    for (std::size_t c = 0; c < rows[r].size(); ++c) os << (c ? ", " : "") << rows[r][c];
    os << "]";
  }
  os << "],\n  \"sequence_factors\": [";
  for (std::size_t t = 0; t < factors.size(); ++t)
    os << (t ? ", " : "") << "\"" << factors[t] << "\"";
  os << "]";
  if (!extra_options.empty()) os << ",\n  \"options\": {" << extra_options << "}";
  os << "\n}\n";
  return os.str();
}

inline std::vector<std::vector<std::string>> coefficient_rows(const PolySeq& seq) {
  std::vector<std::vector<std::string>> rows;
  for (const Poly& p : seq.polys) {
    std::vector<std::string> row;
    for (const Rational& c : p.dense_coefficients()) {
      std::string text = to_string(c);
      if (text.find('/') != std::string::npos) text = "\"" + text + "\"";
      row.push_back(std::move(text));
    }
    if (row.empty()) row.push_back("0");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace testutil
