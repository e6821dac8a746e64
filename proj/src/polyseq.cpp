#include "polyguess/polyseq.hpp"

namespace polyguess {

void PolySeq::validate() const {
  if (polys.empty()) throw InputError("empty polynomial sequence");
  if (start_index < 0) throw InputError("sequence start index must be nonnegative");
  for (const auto& p : polys) {
    if (!p.is_zero() && p.var() != var) {
      throw InputError("all polynomials must use the sequence variable '" + var + "'");
    }
  }
}

PolySeq make_polyseq(std::vector<Poly> polys, long start_index) {
  PolySeq seq;
  seq.polys = std::move(polys);
  seq.start_index = start_index;
  for (const auto& p : seq.polys) {
    if (!p.is_zero()) {
      seq.var = p.var();
      break;
    }
  }
  if (seq.var.empty() && !seq.polys.empty()) seq.var = seq.polys.front().var();
  seq.validate();
  return seq;
}

std::pair<PolySeq, std::vector<Int>> clear_denominators_lcm(const PolySeq& seq) {
  seq.validate();
  PolySeq out = seq;
  std::vector<Int> multipliers;
  multipliers.reserve(seq.polys.size());
  TransformRecord record{"clear_lcm", "", {}};
  for (std::size_t r = 0; r < seq.polys.size(); ++r) {
    Int m(1);
    for (const auto& [e, c] : seq.polys[r].coefficients()) {
      (void)e;
      m = lcm_int(m, c.get_den());
    }
    out.polys[r] = seq.polys[r] * Rational(m);
    multipliers.push_back(m);
    record.multipliers.push_back(m.get_str());
  }
  out.provenance.push_back(std::move(record));
  return {std::move(out), std::move(multipliers)};
}

PolySeq normalize_exponential(const PolySeq& seq, ExpNormalizeMode mode) {
  seq.validate();
  PolySeq out = seq;
  const char* detail = mode == ExpNormalizeMode::ByJFactorial   ? "by_j_factorial"
                       : mode == ExpNormalizeMode::ByIFactorial ? "by_i_factorial"
                                                                : "by_both";
  for (std::size_t r = 0; r < seq.polys.size(); ++r) {
    long j = seq.index_of(r);
    Poly scaled(seq.var);
    for (const auto& [e, c] : seq.polys[r].coefficients()) {
      Rational factor(1);
      if (mode != ExpNormalizeMode::ByIFactorial) factor *= Rational(factorial(j));
      if (mode != ExpNormalizeMode::ByJFactorial) factor *= Rational(factorial(e));
      scaled.set_coefficient(e, c * factor);
    }
    out.polys[r] = std::move(scaled);
  }
  out.provenance.push_back({"exponential", detail, {}});
  return out;
}

PolySeq apply_user_guess(const PolySeq& seq, const GuessExpr& u) {
  seq.validate();
  PolySeq out = seq;
  for (std::size_t r = 0; r < seq.polys.size(); ++r) {
    long j = seq.index_of(r);
    Poly scaled(seq.var);
    for (const auto& [e, c] : seq.polys[r].coefficients()) {
      scaled.set_coefficient(e, c * evaluate_guess_expr(u, j, e));
    }
    out.polys[r] = std::move(scaled);
  }
  out.provenance.push_back({"user_guess", u.text, {}});
  return out;
}

namespace {

// Stirling tables used by the basis changes:
//   x^n     = sum_k S2(n,k) * x^(k)            (second kind)
//   x^(n)   = sum_k (-1)^(n-k) c(n,k) * x^k    (signed first kind)
std::vector<std::vector<Int>> stirling2_rows(std::size_t n_max) {
  std::vector<std::vector<Int>> rows(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    rows[n].assign(n + 1, Int(0));
    if (n == 0) {
      rows[0][0] = 1;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      Int up = k < n ? rows[n - 1][k] : Int(0);
      rows[n][k] = Int(static_cast<long>(k)) * up + rows[n - 1][k - 1];
    }
  }
  return rows;
}

std::vector<std::vector<Int>> stirling1_signed_rows(std::size_t n_max) {
  std::vector<std::vector<Int>> rows(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    rows[n].assign(n + 1, Int(0));
    if (n == 0) {
      rows[0][0] = 1;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      Int up = k < n ? rows[n - 1][k] : Int(0);
      Int diag = k >= 1 ? rows[n - 1][k - 1] : Int(0);
      rows[n][k] = Int(-(static_cast<long>(n) - 1)) * up + diag;
    }
  }
  return rows;
}

}  // namespace

std::vector<Rational> change_basis_monomial_to_falling(const std::vector<Rational>& coeffs) {
  if (coeffs.empty()) return {};
  std::size_t deg = coeffs.size() - 1;
  auto s2 = stirling2_rows(deg);
  std::vector<Rational> out(coeffs.size(), Rational(0));
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    for (std::size_t k = 0; k <= n; ++k) out[k] += coeffs[n] * Rational(s2[n][k]);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::vector<Rational> change_basis_falling_to_monomial(const std::vector<Rational>& coeffs) {
  if (coeffs.empty()) return {};
  std::size_t deg = coeffs.size() - 1;
  auto s1 = stirling1_signed_rows(deg);
  std::vector<Rational> out(coeffs.size(), Rational(0));
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    for (std::size_t k = 0; k <= n; ++k) out[k] += coeffs[n] * Rational(s1[n][k]);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

}  // namespace polyguess
