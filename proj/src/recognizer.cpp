#include "polyguess/recognizer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace polyguess {

ClosedForm ClosedForm::make_const(const Rational& c) {
  ClosedForm f;
  f.kind = Kind::Const;
  f.constant = c;
  return f;
}

int ClosedForm::node_count() const {
  if (kind != Kind::Product) return 1;
  int n = 0;
  for (const auto& f : factors) n += f.node_count();
  return std::max(n, 1);
}

int ClosedForm::total_degree() const {
  switch (kind) {
    case Kind::PolyInIndex:
      return poly.empty() ? 0 : static_cast<int>(poly.size()) - 1;
    case Kind::Product: {
      int d = 0;
      for (const auto& f : factors) d += f.total_degree();
      return d;
    }
    default:
      return 0;
  }
}

bool ClosedForm::operator==(const ClosedForm& rhs) const {
  if (kind != rhs.kind) return false;
  switch (kind) {
    case Kind::Const:
      return constant == rhs.constant;
    case Kind::PolyInIndex:
      return poly == rhs.poly;
    case Kind::Geometric:
      return base == rhs.base && arg == rhs.arg;
    case Kind::FactorialOf:
      return arg == rhs.arg && reciprocal == rhs.reciprocal;
    case Kind::SignAlt:
      return arg == rhs.arg;
    case Kind::Product:
      return factors == rhs.factors;
  }
  return false;
}

std::string closed_form_key(const ClosedForm& f) {
  std::ostringstream os;
  switch (f.kind) {
    case ClosedForm::Kind::Const:
      os << "C:" << to_string(f.constant);
      break;
    case ClosedForm::Kind::PolyInIndex:
      os << "P:";
      for (const auto& c : f.poly) os << to_string(c) << ',';
      break;
    case ClosedForm::Kind::Geometric:
      os << "G:" << to_string(f.base) << ':' << f.arg.slope << ',' << f.arg.offset;
      break;
    case ClosedForm::Kind::FactorialOf:
      os << "F:" << f.arg.slope << ',' << f.arg.offset << (f.reciprocal ? ":r" : "");
      break;
    case ClosedForm::Kind::SignAlt:
      os << "S:" << f.arg.slope << ',' << f.arg.offset;
      break;
    case ClosedForm::Kind::Product:
      os << "Pr[";
      for (const auto& c : f.factors) os << closed_form_key(c) << ';';
      os << ']';
      break;
  }
  return os.str();
}

Rational evaluate_closed_form(const ClosedForm& form, long m) {
  switch (form.kind) {
    case ClosedForm::Kind::Const:
      return form.constant;
    case ClosedForm::Kind::PolyInIndex: {
      Rational acc(0);
      for (auto it = form.poly.rbegin(); it != form.poly.rend(); ++it) {
        acc = acc * Rational(m) + *it;
      }
      return acc;
    }
    case ClosedForm::Kind::Geometric:
      return pow_rational(form.base, form.arg.at(m));
    case ClosedForm::Kind::FactorialOf: {
      Rational f(factorial(form.arg.at(m)));
      return form.reciprocal ? Rational(1) / f : f;
    }
    case ClosedForm::Kind::SignAlt:
      return ((form.arg.at(m) % 2 + 2) % 2 == 0) ? Rational(1) : Rational(-1);
    case ClosedForm::Kind::Product: {
      Rational acc(1);
      for (const auto& f : form.factors) acc *= evaluate_closed_form(f, m);
      return acc;
    }
  }
  throw DomainError("corrupt closed form");
}

namespace {

// ---------------------------------------------------------------------------
// Small exact-polynomial helpers (coefficients ascending).

using QPoly = std::vector<Rational>;

void qp_trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int qp_degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

Rational qp_eval(const QPoly& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  qp_trim(out);
  return out;
}

// p(m + 1)
QPoly qp_shift(const QPoly& p) {
  QPoly out(p.size(), Rational(0));
  // Expand via binomials: m^t -> sum_r C(t, r) m^r.
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (std::size_t r = 0; r <= t; ++r) {
      out[r] += p[t] * Rational(binomial(static_cast<long>(t), static_cast<long>(r)));
    }
  }
  qp_trim(out);
  return out;
}

// Exact division; nullopt when the remainder is nonzero.
std::optional<QPoly> qp_div_exact(QPoly num, const QPoly& den) {
  qp_trim(num);
  if (den.empty()) return std::nullopt;
  if (num.empty()) return QPoly{};
  if (num.size() < den.size()) return std::nullopt;
  QPoly quot(num.size() - den.size() + 1, Rational(0));
  for (long q = static_cast<long>(quot.size()) - 1; q >= 0; --q) {
    Rational c = num[q + den.size() - 1] / den.back();
    quot[q] = c;
    if (c == 0) continue;
    for (std::size_t t = 0; t < den.size(); ++t) num[q + t] -= c * den[t];
  }
  for (const auto& r : num) {
    if (r != 0) return std::nullopt;
  }
  qp_trim(quot);
  return quot;
}

std::optional<Rational> rational_sqrt(const Rational& v) {
  if (v < 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_num_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_den_mpz_t()) == 0) return std::nullopt;
  Rational out;
  mpz_sqrt(out.get_num_mpz_t(), v.get_num_mpz_t());
  mpz_sqrt(out.get_den_mpz_t(), v.get_den_mpz_t());
  out.canonicalize();
  return out;
}

// All rational roots with multiplicity for degree <= 2; nullopt when the
// polynomial does not split over the rationals.
std::optional<std::vector<Rational>> qp_rational_roots(const QPoly& p) {
  int deg = qp_degree(p);
  if (deg <= 0) return std::vector<Rational>{};
  if (deg == 1) return std::vector<Rational>{-p[0] / p[1]};
  if (deg == 2) {
    Rational disc = p[1] * p[1] - Rational(4) * p[2] * p[0];
    auto r = rational_sqrt(disc);
    if (!r) return std::nullopt;
    Rational two_a = Rational(2) * p[2];
    return std::vector<Rational>{(-p[1] + *r) / two_a, (-p[1] - *r) / two_a};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonicalization: flatten products, merge constants and sign factors, drop
// trivial pieces, order children deterministically.

int kind_rank(ClosedForm::Kind k) {
  switch (k) {
    case ClosedForm::Kind::Const: return 0;
    case ClosedForm::Kind::SignAlt: return 1;
    case ClosedForm::Kind::Geometric: return 2;
    case ClosedForm::Kind::PolyInIndex: return 3;
    case ClosedForm::Kind::FactorialOf: return 4;
    case ClosedForm::Kind::Product: return 5;
  }
  return 6;
}

void flatten_into(const ClosedForm& f, std::vector<ClosedForm>& out) {
  if (f.kind == ClosedForm::Kind::Product) {
    for (const auto& c : f.factors) flatten_into(c, out);
  } else {
    out.push_back(f);
  }
}

ClosedForm canonicalize(const ClosedForm& input) {
  std::vector<ClosedForm> flat;
  flatten_into(input, flat);

  Rational const_acc(1);
  long sign_slope = 0, sign_offset = 0;
  bool has_sign = false;
  std::vector<ClosedForm> rest;
  for (auto& f : flat) {
    switch (f.kind) {
      case ClosedForm::Kind::Const:
        const_acc *= f.constant;
        break;
      case ClosedForm::Kind::SignAlt:
        sign_slope += f.arg.slope;
        sign_offset += f.arg.offset;
        has_sign = true;
        break;
      case ClosedForm::Kind::Geometric:
        if (f.base == 1 || f.arg.slope == 0) {
          const_acc *= pow_rational(f.base, f.arg.offset);
        } else {
          rest.push_back(f);
        }
        break;
      case ClosedForm::Kind::PolyInIndex: {
        QPoly p = f.poly;
        qp_trim(p);
        if (qp_degree(p) <= 0) {
          const_acc *= p.empty() ? Rational(0) : p[0];
        } else {
          f.poly = p;
          rest.push_back(f);
        }
        break;
      }
      case ClosedForm::Kind::FactorialOf:
        if (f.arg.slope == 0 && f.arg.offset >= 0) {
          Rational v(factorial(f.arg.offset));
          const_acc *= f.reciprocal ? Rational(1) / v : v;
        } else {
          rest.push_back(f);
        }
        break;
      case ClosedForm::Kind::Product:
        break;  // flattened already
    }
  }

  if (has_sign) {
    long slope = ((sign_slope % 2) + 2) % 2;
    long offset = ((sign_offset % 2) + 2) % 2;
    if (slope == 0) {
      if (offset == 1) const_acc = -const_acc;
    } else {
      ClosedForm s;
      s.kind = ClosedForm::Kind::SignAlt;
      s.arg = {1, offset};
      rest.push_back(s);
    }
  }

  if (const_acc == 0) return ClosedForm::make_const(Rational(0));

  std::sort(rest.begin(), rest.end(), [](const ClosedForm& a, const ClosedForm& b) {
    if (kind_rank(a.kind) != kind_rank(b.kind)) return kind_rank(a.kind) < kind_rank(b.kind);
    return closed_form_key(a) < closed_form_key(b);
  });

  std::vector<ClosedForm> children;
  if (const_acc != 1 || rest.empty()) children.push_back(ClosedForm::make_const(const_acc));
  for (auto& f : rest) children.push_back(std::move(f));
  if (children.size() == 1) return children.front();
  ClosedForm out;
  out.kind = ClosedForm::Kind::Product;
  out.factors = std::move(children);
  return out;
}

// ---------------------------------------------------------------------------
// Recognition stages.  Every stage may propose candidates; each proposal is
// verified against all input values before it is returned.

struct Window {
  const std::vector<Rational>& values;
  long start;

  std::size_t size() const { return values.size(); }
  bool all_nonzero() const {
    return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v != 0; });
  }
};

void propose_constant(const Window& w, std::vector<ClosedForm>& out) {
  for (const auto& v : w.values) {
    if (v != w.values.front()) return;
  }
  out.push_back(ClosedForm::make_const(w.values.front()));
}

// Finite differences with at least two confirming zero rows; reconstructs the
// Newton form and expands it in the global index m.
void propose_polynomial(const Window& w, const RecognizerOptions& opts,
                        std::vector<ClosedForm>& out) {
  std::size_t n = w.size();
  if (n < 3) return;
  std::vector<Rational> row(w.values);
  std::vector<Rational> leading;  // Delta^t v at the window start
  int degree = -1;
  for (std::size_t t = 0; t + 1 <= n; ++t) {
    leading.push_back(row.front());
    bool all_zero = std::all_of(row.begin(), row.end(), [](const Rational& v) { return v == 0; });
    if (all_zero && row.size() >= 2) {
      degree = static_cast<int>(t) - 1;
      break;
    }
    if (row.size() == 1) return;  // ran out of data before two zero rows
    std::vector<Rational> next(row.size() - 1);
    for (std::size_t r = 0; r + 1 < row.size(); ++r) next[r] = row[r + 1] - row[r];
    row = std::move(next);
  }
  if (degree < 0 || degree > opts.max_poly_degree) return;
  if (static_cast<std::size_t>(degree) + 3 > n) return;  // needs degree+3 values

  // p(m) = sum_t Delta^t v(start) * C(m - start, t)
  QPoly acc;
  QPoly binom{Rational(1)};  // C(m - start, 0)
  for (int t = 0; t <= degree; ++t) {
    if (t > 0) {
      // multiply by (m - start - (t-1)) / t
      QPoly lin{Rational(-w.start - (t - 1)), Rational(1)};
      binom = qp_mul(binom, lin);
      for (auto& c : binom) c /= Rational(t);
    }
    if (leading[static_cast<std::size_t>(t)] != 0) {
      QPoly term = binom;
      for (auto& c : term) c *= leading[static_cast<std::size_t>(t)];
      if (acc.size() < term.size()) acc.resize(term.size(), Rational(0));
      for (std::size_t e = 0; e < term.size(); ++e) acc[e] += term[e];
    }
  }
  qp_trim(acc);
  if (qp_degree(acc) < 1) return;  // constants come from stage 1
  ClosedForm f;
  f.kind = ClosedForm::Kind::PolyInIndex;
  f.poly = std::move(acc);
  out.push_back(std::move(f));
}

void propose_geometric(const Window& w, std::vector<ClosedForm>& out) {
  if (w.size() < 3 || !w.all_nonzero()) return;
  Rational ratio = w.values[1] / w.values[0];
  if (ratio == 1 || ratio == -1) return;  // constant / sign-alternation territory
  for (std::size_t m = 1; m + 1 < w.size(); ++m) {
    if (w.values[m + 1] / w.values[m] != ratio) return;
  }
  ClosedForm g;
  g.kind = ClosedForm::Kind::Geometric;
  g.base = ratio;
  g.arg = {1, -w.start};
  ClosedForm c = ClosedForm::make_const(w.values.front());
  ClosedForm prod;
  prod.kind = ClosedForm::Kind::Product;
  prod.factors = {c, g};
  out.push_back(std::move(prod));
}

// --- hypergeometric ratio fit --------------------------------------------

// Reduced-row-echelon nullspace basis of the homogeneous system rows * x = 0.
std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> m,
                                             std::size_t cols) {
  std::size_t rank = 0;
  std::vector<long> pivot_of_col(cols, -1);
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t sel = rank;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[rank], m[sel]);
    Rational inv = Rational(1) / m[rank][col];
    for (auto& v : m[rank]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    pivot_of_col[col] = static_cast<long>(rank);
    ++rank;
  }
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (pivot_of_col[free_col] >= 0) continue;
    std::vector<Rational> x(cols, Rational(0));
    x[free_col] = 1;
    for (std::size_t col = 0; col < cols; ++col) {
      if (pivot_of_col[col] >= 0) {
        x[col] = -m[static_cast<std::size_t>(pivot_of_col[col])][free_col];
      }
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// Scales P and Q by one common factor so both are integer with coprime joint
// content and Q has a positive leading coefficient.  A shared scale keeps the
// ratio P/Q exact; normalizing the two sides separately would silently drop
// the leading-coefficient ratio the Geometric piece is recovered from.
void qp_joint_normalize(QPoly& p, QPoly& q) {
  qp_trim(p);
  qp_trim(q);
  if (p.empty() || q.empty()) return;
  Int den(1);
  for (const auto& c : p) den = lcm_int(den, c.get_den());
  for (const auto& c : q) den = lcm_int(den, c.get_den());
  Int content(0);
  for (auto* poly : {&p, &q}) {
    for (auto& c : *poly) {
      c *= Rational(den);
      Int g;
      mpz_gcd(g.get_mpz_t(), content.get_mpz_t(), c.get_num_mpz_t());
      content = g;
    }
  }
  if (content > 1) {
    for (auto* poly : {&p, &q}) {
      for (auto& c : *poly) c /= Rational(content);
    }
  }
  if (q.back() < 0) {
    for (auto* poly : {&p, &q}) {
      for (auto& c : *poly) c = -c;
    }
  }
}

// Interprets the ratio v_{m+1}/v_m = P(m)/Q(m) as a product of closed-form
// pieces.  The factorization route:
//   * a monic divisor q of Q with q(m+1) | P telescopes into the polynomial
//     part q(m) itself;
//   * remaining integer roots of numerator/denominator become rising
//     factorial-quotients, i.e. FactorialOf pieces (reciprocal on the Q
//     side), with roots at or beyond the window turning into falling
//     factorials plus a sign alternation;
//   * the leading-coefficient ratio becomes a Geometric piece.
void resolve_ratio(const QPoly& P, const QPoly& Q, const Window& w,
                   std::vector<ClosedForm>& out) {
  long s = w.start;
  long last_ratio_index = w.start + static_cast<long>(w.size()) - 2;

  for (long t = s; t <= last_ratio_index; ++t) {
    if (qp_eval(Q, Rational(t)) == 0 || qp_eval(P, Rational(t)) == 0) return;
  }

  // Candidate monic divisors of Q, degree >= 0.
  QPoly q_monic = Q;
  for (auto& c : q_monic) c /= Q.back();
  std::vector<QPoly> q_candidates{QPoly{Rational(1)}};
  if (qp_degree(Q) >= 1) {
    auto roots = qp_rational_roots(Q);
    if (roots) {
      std::vector<Rational> uniq(*roots);
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      for (const auto& r : uniq) q_candidates.push_back(QPoly{-r, Rational(1)});
    }
    if (qp_degree(Q) == 2) q_candidates.push_back(q_monic);
  }

  for (const auto& q : q_candidates) {
    auto Q_rest = qp_div_exact(Q, q);
    if (!Q_rest) continue;
    auto P_rest = qp_div_exact(P, qp_shift(q));
    if (!P_rest) continue;

    auto p_roots = qp_rational_roots(*P_rest);
    auto r_roots = qp_rational_roots(*Q_rest);
    if (!p_roots || !r_roots) continue;
    bool integer_roots = true;
    for (const auto& r : *p_roots) integer_roots = integer_roots && is_integer(r);
    for (const auto& r : *r_roots) integer_roots = integer_roots && is_integer(r);
    if (!integer_roots) continue;
    if (qp_eval(q, Rational(s)) == 0) continue;

    Rational const_acc = w.values.front();
    int sign_parity = 0;
    std::vector<ClosedForm> pieces;
    bool ok = true;

    if (qp_degree(q) >= 1) {
      ClosedForm poly;
      poly.kind = ClosedForm::Kind::PolyInIndex;
      poly.poly = q;
      pieces.push_back(std::move(poly));
      const_acc /= qp_eval(q, Rational(s));
    }

    Rational lead = P_rest->back() / Q_rest->back();
    if (lead < 0) {
      sign_parity ^= 1;
      lead = -lead;
    }
    if (lead != 1) {
      ClosedForm g;
      g.kind = ClosedForm::Kind::Geometric;
      g.base = lead;
      g.arg = {1, -s};
      pieces.push_back(std::move(g));
    }

    auto handle_root = [&](const Rational& root, bool denominator_side) {
      if (!root.get_num().fits_slong_p()) {
        ok = false;
        return;
      }
      long a = root.get_num().get_si();
      ClosedForm f;
      f.kind = ClosedForm::Kind::FactorialOf;
      if (a < s) {
        // prod_{t=s}^{m-1} (t - a) = (m-1-a)! / (s-1-a)!
        f.arg = {1, -(1 + a)};
        f.reciprocal = denominator_side;
        Rational fixup(factorial(s - 1 - a));
        if (denominator_side)
          const_acc *= fixup;
        else
          const_acc /= fixup;
      } else if (a > last_ratio_index) {
        // prod_{t=s}^{m-1} (t - a) = (-1)^(m-s) (a-s)! / (a-m)!
        sign_parity ^= 1;
        f.arg = {-1, a};
        f.reciprocal = !denominator_side;
        Rational fixup(factorial(a - s));
        if (denominator_side)
          const_acc /= fixup;
        else
          const_acc *= fixup;
      } else {
        ok = false;  // a root inside the window would force a zero value
        return;
      }
      pieces.push_back(std::move(f));
    };
    for (const auto& r : *p_roots) {
      if (!ok) break;
      handle_root(r, false);
    }
    for (const auto& r : *r_roots) {
      if (!ok) break;
      handle_root(r, true);
    }
    if (!ok) continue;

    if (sign_parity) {
      ClosedForm sa;
      sa.kind = ClosedForm::Kind::SignAlt;
      sa.arg = {1, ((-s) % 2 + 2) % 2};
      pieces.push_back(std::move(sa));
    }
    pieces.push_back(ClosedForm::make_const(const_acc));
    ClosedForm prod;
    prod.kind = ClosedForm::Kind::Product;
    prod.factors = std::move(pieces);
    out.push_back(std::move(prod));
  }
}

void propose_hypergeometric(const Window& w, const RecognizerOptions& opts,
                            std::vector<ClosedForm>& out) {
  std::size_t n = w.size();
  if (n < 4 || !w.all_nonzero()) return;

  int cap = opts.max_ratio_degree;
  std::vector<std::pair<int, int>> degree_pairs;
  for (int total = 0; total <= 2 * cap; ++total) {
    for (int dp = 0; dp <= std::min(total, cap); ++dp) {
      int dq = total - dp;
      if (dq <= cap) degree_pairs.emplace_back(dp, dq);
    }
  }

  for (auto [dp, dq] : degree_pairs) {
    std::size_t unknowns = static_cast<std::size_t>(dp + dq + 2);
    if (n - 1 < unknowns) continue;  // demand at least one confirming equation

    // v_{m+1} * Q(m) - v_m * P(m) = 0, columns [q_0..q_dq, p_0..p_dp].
    std::vector<std::vector<Rational>> rows;
    for (std::size_t r = 0; r + 1 < n; ++r) {
      Rational m(w.start + static_cast<long>(r));
      std::vector<Rational> row(unknowns, Rational(0));
      Rational pw(1);
      for (int a = 0; a <= dq; ++a) {
        row[static_cast<std::size_t>(a)] = w.values[r + 1] * pw;
        pw *= m;
      }
      pw = 1;
      for (int b = 0; b <= dp; ++b) {
        row[static_cast<std::size_t>(dq + 1 + b)] = -w.values[r] * pw;
        pw *= m;
      }
      rows.push_back(std::move(row));
    }

    std::size_t before = out.size();
    for (const auto& x : nullspace(std::move(rows), unknowns)) {
      QPoly Q(x.begin(), x.begin() + dq + 1);
      QPoly P(x.begin() + dq + 1, x.end());
      qp_joint_normalize(P, Q);
      if (P.empty() || Q.empty()) continue;
      resolve_ratio(P, Q, w, out);
    }
    if (out.size() > before) return;  // minimal ratio degree wins
  }
}

void run_stages(const Window& w, const RecognizerOptions& opts, std::vector<ClosedForm>& out) {
  propose_constant(w, out);
  propose_polynomial(w, opts, out);
  propose_geometric(w, out);
  propose_hypergeometric(w, opts, out);
}

}  // namespace

std::vector<ClosedForm> recognize_sequence(const std::vector<Rational>& values, long start,
                                           const RecognizerOptions& opts) {
  if (values.empty()) throw InputError("recognize_sequence needs at least one value");

  std::vector<ClosedForm> raw;
  Window w{values, start};
  run_stages(w, opts, raw);

  // When the signs strictly alternate, also recognize |v| and wrap the result
  // with the extracted (-1)^(m - start).
  bool alternating = values.size() >= 2 && values.front() != 0;
  for (std::size_t m = 0; m + 1 < values.size() && alternating; ++m) {
    alternating = values[m] != 0 && values[m + 1] != 0 &&
                  ((values[m] > 0) != (values[m + 1] > 0));
  }
  if (alternating) {
    std::vector<Rational> extracted(values.size());
    for (std::size_t m = 0; m < values.size(); ++m) {
      extracted[m] = (m % 2 == 0) ? values[m] : -values[m];
    }
    std::vector<ClosedForm> inner;
    Window we{extracted, start};
    run_stages(we, opts, inner);
    for (auto& f : inner) {
      ClosedForm sa;
      sa.kind = ClosedForm::Kind::SignAlt;
      sa.arg = {1, ((start % 2) + 2) % 2};  // (-1)^(m - start) = (-1)^(m + start)
      ClosedForm prod;
      prod.kind = ClosedForm::Kind::Product;
      prod.factors = {sa, std::move(f)};
      raw.push_back(std::move(prod));
    }
  }

  // Verify, canonicalize, dedupe, rank.
  std::vector<ClosedForm> verified;
  std::vector<std::string> seen;
  for (const auto& f : raw) {
    ClosedForm canon = canonicalize(f);
    bool ok = true;
    for (std::size_t m = 0; m < values.size() && ok; ++m) {
      try {
        ok = evaluate_closed_form(canon, start + static_cast<long>(m)) == values[m];
      } catch (const DomainError&) {
        ok = false;
      }
    }
    if (!ok) continue;
    std::string key = closed_form_key(canon);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    verified.push_back(std::move(canon));
  }
  std::stable_sort(verified.begin(), verified.end(), [](const ClosedForm& a, const ClosedForm& b) {
    if (a.node_count() != b.node_count()) return a.node_count() < b.node_count();
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    return closed_form_key(a) < closed_form_key(b);
  });
  if (verified.size() > static_cast<std::size_t>(opts.max_results)) {
    verified.resize(static_cast<std::size_t>(opts.max_results));
  }
  return verified;
}

std::optional<IndexPoly> fit_index_function(const std::vector<std::pair<long, long>>& points) {
  std::map<long, long> dedup;
  for (const auto& [j, v] : points) {
    auto it = dedup.find(j);
    if (it != dedup.end()) {
      if (it->second != v) {
        throw InputError("conflicting values for sequence index " + std::to_string(j));
      }
      continue;
    }
    dedup[j] = v;
  }
  if (dedup.size() < 2) throw InputError("fit_index_function needs at least two distinct points");

  std::vector<std::pair<long, long>> pts(dedup.begin(), dedup.end());
  auto fits_all = [&](const IndexPoly& p) {
    return std::all_of(pts.begin(), pts.end(),
                       [&](const auto& pt) { return p.at(pt.first) == pt.second; });
  };

  // degree 0
  IndexPoly c = IndexPoly::constant(pts.front().second);
  if (fits_all(c)) return c;

  // degree 1: line through the first two points, integer coefficients only
  {
    long dj = pts[1].first - pts[0].first;
    long dv = pts[1].second - pts[0].second;
    if (dv % dj == 0) {
      IndexPoly line{pts[0].second - (dv / dj) * pts[0].first, dv / dj, 0};
      if (fits_all(line)) return line;
    }
  }

  // degree 2: Newton divided differences through the first three points
  if (pts.size() >= 3) {
    Rational x0(pts[0].first), x1(pts[1].first), x2(pts[2].first);
    Rational f01 = Rational(pts[1].second - pts[0].second) / (x1 - x0);
    Rational f12 = Rational(pts[2].second - pts[1].second) / (x2 - x1);
    Rational f012 = (f12 - f01) / (x2 - x0);
    // p(j) = f0 + f01 (j - x0) + f012 (j - x0)(j - x1)
    Rational c2 = f012;
    Rational c1 = f01 - f012 * (x0 + x1);
    Rational c0 = Rational(pts[0].second) - f01 * x0 + f012 * x0 * x1;
    if (is_integer(c0) && is_integer(c1) && is_integer(c2) && c2 != 0 &&
        c0.get_num().fits_slong_p() && c1.get_num().fits_slong_p() &&
        c2.get_num().fits_slong_p()) {
      IndexPoly quad{c0.get_num().get_si(), c1.get_num().get_si(), c2.get_num().get_si()};
      if (fits_all(quad)) return quad;
    }
  }
  return std::nullopt;
}

}  // namespace polyguess
