#include "polyguess/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "polyguess/common.hpp"

namespace polyguess {
namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  bool enabled = false;
  Clock::time_point at{};

  static Deadline after_ms(long ms) {
    Deadline d;
    if (ms > 0) {
      d.enabled = true;
      d.at = Clock::now() + std::chrono::milliseconds(ms);
    }
    return d;
  }
  bool exceeded() const { return enabled && Clock::now() > at; }
};

struct BudgetExceeded {};

void check_deadline(const Deadline& d) {
  if (d.exceeded()) throw BudgetExceeded{};
}

using Tables = std::vector<std::shared_ptr<const TriangleTable>>;
using DecompCache = std::map<Int, std::vector<FactorDecomposition>>;

// Entry under the template's evaluation semantics: indices outside the
// triangular region are exact zeros; a row at or beyond the table band is
// unavailable (nullopt) so callers can prune or fail instead of guessing.
std::optional<Int> region_entry(const TriangleTable& t, long n, long k) {
  if (n < 0 || k < 0 || k > n) return Int(0);
  if (n >= t.num_rows()) return std::nullopt;
  return t.entry(static_cast<int>(n), static_cast<int>(k));
}

struct PreparedRow {
  long j = 0;
  std::vector<Int> coeffs;    // dense, length j + j0 + 1 (empty when negative)
  std::vector<long> nonzero;  // positions i with coeffs[i] != 0
};

// Dense integer coefficient rows for one j0, or nullopt when some polynomial
// cannot structurally fit under the bound deg p_j <= j + j0.
std::optional<std::vector<PreparedRow>> prepare_rows(const PolySeq& seq, long j0) {
  std::vector<PreparedRow> rows;
  rows.reserve(seq.size());
  for (std::size_t r = 0; r < seq.size(); ++r) {
    const long j = seq.index_of(r);
    const Poly& p = seq.polys[r];
    const long width = j + j0 + 1;
    if (p.degree() >= width) return std::nullopt;
    PreparedRow row;
    row.j = j;
    if (width > 0) {
      row.coeffs.assign(static_cast<std::size_t>(width), Int(0));
      for (const auto& [e, c] : p.coefficients()) {
        row.coeffs[static_cast<std::size_t>(e)] = c.get_num();
        row.nonzero.push_back(e);
      }
    } else if (!p.is_zero()) {
      return std::nullopt;  // empty sum cannot produce a nonzero polynomial
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct SlotBase {
  long un = 0;  // upper index at i = 0
  long ln = 0;  // lower index at i = 0
};

struct RowSolution {
  std::vector<SlotBase> base;
  std::vector<std::optional<Int>> rem;  // per i; nullopt where the factor vanishes
};

enum class WalkStatus { Ok, Mismatch, OutOfRange };

// Checks one row against fixed base positions: every position must either
// have a vanishing triangle factor (then the coefficient must be zero) or
// divide the coefficient exactly.  Remainders are the exact signed quotients.
WalkStatus walk_row(const Tables& tables, const SlopeTuple& slopes,
                    const std::vector<SlotBase>& base, const PreparedRow& row,
                    std::vector<std::optional<Int>>& rem_out) {
  const long width = static_cast<long>(row.coeffs.size());
  rem_out.assign(row.coeffs.size(), std::nullopt);
  for (long i = 0; i < width; ++i) {
    Int f(1);
    bool zero = false;
    bool out = false;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      auto e = region_entry(*tables[t], base[t].un + slopes[t].u * i,
                            base[t].ln + slopes[t].l * i);
      if (!e) {
        out = true;
        continue;
      }
      if (*e == 0) {
        zero = true;
        break;
      }
      f *= *e;
    }
    const Int& c = row.coeffs[static_cast<std::size_t>(i)];
    if (zero) {
      if (c != 0) return WalkStatus::Mismatch;
      continue;  // wildcard: the term vanishes regardless of the remainder
    }
    if (out) return WalkStatus::OutOfRange;
    if (!divides(f, c)) return WalkStatus::Mismatch;
    rem_out[static_cast<std::size_t>(i)] = div_exact(c, f);
  }
  return WalkStatus::Ok;
}

// All base-position assignments for one row consistent with the slopes.
// Every nonzero coefficient serves as an anchor: each of its decompositions
// fixes the base positions, which the walk then validates.  Taking the union
// over anchors keeps a valid assignment reachable even when the per-class
// position cap truncated one anchor's decomposition list.
std::vector<RowSolution> derive_row_solutions(const PreparedRow& row, const SlopeTuple& slopes,
                                              const Tables& tables, const DecompCache& cache,
                                              const Deadline& deadline, bool& saw_range) {
  std::vector<RowSolution> out;
  std::set<std::vector<std::pair<long, long>>> seen;
  for (long anchor : row.nonzero) {
    for (const FactorDecomposition& d :
         cache.at(row.coeffs[static_cast<std::size_t>(anchor)])) {
      check_deadline(deadline);
      RowSolution sol;
      sol.base.resize(tables.size());
      std::vector<std::pair<long, long>> key(tables.size());
      for (std::size_t t = 0; t < tables.size(); ++t) {
        sol.base[t].un = d.factors[t].n - slopes[t].u * anchor;
        sol.base[t].ln = d.factors[t].k - slopes[t].l * anchor;
        key[t] = {sol.base[t].un, sol.base[t].ln};
      }
      if (!seen.insert(std::move(key)).second) continue;
      WalkStatus st = walk_row(tables, slopes, sol.base, row, sol.rem);
      if (st == WalkStatus::OutOfRange) {
        saw_range = true;
        continue;
      }
      if (st == WalkStatus::Ok) out.push_back(std::move(sol));
    }
  }
  return out;
}

struct Chain {
  std::vector<IndexPoly> upper;  // one per slot
  std::vector<IndexPoly> lower;
  std::vector<std::vector<std::optional<Int>>> grid;  // remainder per row, per i
};

std::string chain_signature(const std::vector<IndexPoly>& upper,
                            const std::vector<IndexPoly>& lower) {
  std::ostringstream os;
  for (std::size_t t = 0; t < upper.size(); ++t) {
    os << upper[t].c0 << ',' << upper[t].c1 << ',' << upper[t].c2 << ';';
    os << lower[t].c0 << ',' << lower[t].c1 << ',' << lower[t].c2 << '|';
  }
  return os.str();
}

// Fits all 2r index polynomials through the chosen base-row solutions, then
// validates every row (informative and zero alike) by predicting positions
// and walking.  Valid chains carry the full remainder grid.
std::optional<Chain> try_chain(const std::vector<PreparedRow>& rows, const SlopeTuple& slopes,
                               const Tables& tables, const std::vector<std::size_t>& base_rows,
                               const std::vector<const RowSolution*>& picks, bool& saw_range) {
  const std::size_t r = tables.size();
  Chain chain;
  chain.upper.resize(r);
  chain.lower.resize(r);
  for (std::size_t t = 0; t < r; ++t) {
    std::vector<std::pair<long, long>> up, lo;
    up.reserve(picks.size());
    lo.reserve(picks.size());
    for (std::size_t b = 0; b < picks.size(); ++b) {
      const long j = rows[base_rows[b]].j;
      up.emplace_back(j, picks[b]->base[t].un);
      lo.emplace_back(j, picks[b]->base[t].ln);
    }
    if (picks.size() == 1) {
      chain.upper[t] = IndexPoly::constant(up[0].second);
      chain.lower[t] = IndexPoly::constant(lo[0].second);
      continue;
    }
    auto fu = fit_index_function(up);
    if (!fu) return std::nullopt;
    auto fl = fit_index_function(lo);
    if (!fl) return std::nullopt;
    chain.upper[t] = *fu;
    chain.lower[t] = *fl;
  }
  chain.grid.resize(rows.size());
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    std::vector<SlotBase> base(r);
    for (std::size_t t = 0; t < r; ++t) {
      base[t].un = chain.upper[t].at(rows[ri].j);
      base[t].ln = chain.lower[t].at(rows[ri].j);
    }
    WalkStatus st = walk_row(tables, slopes, base, rows[ri], chain.grid[ri]);
    if (st == WalkStatus::OutOfRange) {
      saw_range = true;
      return std::nullopt;
    }
    if (st != WalkStatus::Ok) return std::nullopt;
  }
  return chain;
}

// Consistent remainder values keyed by i (case A) or by s = j + j0 - i
// (case B); nullopt when two cells that map to the same key disagree.
std::optional<std::map<long, Int>> collect_remainders(const std::vector<PreparedRow>& rows,
                                                      const Chain& chain, bool by_s, long j0) {
  std::map<long, Int> values;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& rem = chain.grid[ri];
    for (std::size_t i = 0; i < rem.size(); ++i) {
      if (!rem[i]) continue;
      const long key = by_s ? rows[ri].j + j0 - static_cast<long>(i) : static_cast<long>(i);
      auto [it, inserted] = values.emplace(key, *rem[i]);
      if (!inserted && it->second != *rem[i]) return std::nullopt;
    }
  }
  return values;
}

// The leading contiguous run of the consistent values, which is what the
// recognizer sees; cells beyond a gap are still enforced by verification.
std::pair<long, std::vector<Rational>> contiguous_window(const std::map<long, Int>& values) {
  std::vector<Rational> vals;
  long start = values.begin()->first;
  long expect = start;
  for (const auto& [k, v] : values) {
    if (k != expect) break;
    vals.emplace_back(v);
    ++expect;
  }
  return {start, vals};
}

int formula_complexity(const Formula& f) {
  int c = f.rs1.node_count() + f.rs2.node_count();
  for (const auto& ft : f.factors) {
    c += ft.upper.degree() + ft.lower.degree();
    c += (ft.upper_slope != 0) + (ft.lower_slope != 0);
  }
  return c;
}

std::string formula_key(const Formula& f) {
  std::ostringstream os;
  os << f.j0 << '|';
  for (const auto& ft : f.factors) {
    os << ft.triangle.key() << ':' << ft.upper.c0 << ',' << ft.upper.c1 << ',' << ft.upper.c2
       << '+' << ft.upper_slope << 'i' << ':' << ft.lower.c0 << ',' << ft.lower.c1 << ','
       << ft.lower.c2 << '+' << ft.lower_slope << "i|";
  }
  os << closed_form_key(f.rs1) << '|' << closed_form_key(f.rs2);
  return os.str();
}

FormulaNames names_for(const PolySeq& seq) {
  FormulaNames names;
  names.variable = seq.var;
  if (seq.var == names.sequence_index) names.sequence_index = "m";
  if (seq.var == names.summation_index) names.summation_index = "t";
  return names;
}

bool verify_with_tables(const Formula& f, const PolySeq& seq, const Tables& tables) {
  for (std::size_t r = 0; r < seq.size(); ++r) {
    const long j = seq.index_of(r);
    const long width = j + f.j0 + 1;
    if (width <= 0) {
      if (!seq.polys[r].is_zero()) return false;
      continue;
    }
    Poly built(seq.polys[r].var());
    for (long i = 0; i < width; ++i) {
      Int fac(1);
      bool zero = false;
      bool out = false;
      for (std::size_t t = 0; t < tables.size(); ++t) {
        const auto& ft = f.factors[t];
        auto e = region_entry(*tables[t], ft.upper.at(j) + ft.upper_slope * i,
                              ft.lower.at(j) + ft.lower_slope * i);
        if (!e) {
          out = true;
          continue;
        }
        if (*e == 0) {
          zero = true;
          break;
        }
        fac *= *e;
      }
      if (zero) continue;
      if (out) return false;
      Rational term(fac);
      try {
        term *= evaluate_closed_form(f.rs1, i);
        term *= evaluate_closed_form(f.rs2, j + f.j0 - i);
      } catch (const Error&) {
        return false;
      }
      if (term != 0) built.set_coefficient(i, built.coefficient(i) + term);
    }
    if (built != seq.polys[r]) return false;
  }
  return true;
}

std::vector<long> probe_list(const SearchOptions& opts) {
  if (opts.index_offset) return {*opts.index_offset};
  return {0, 1, 2};
}

DecompCache build_decomp_cache(const PolySeq& seq, const Tables& tables,
                               const SearchOptions& opts) {
  DecompCache cache;
  for (const Poly& p : seq.polys) {
    for (const auto& [e, c] : p.coefficients()) {
      const Int v = c.get_num();
      if (cache.count(v)) continue;
      cache.emplace(v, factor_over_triangles(v, tables, opts.per_slot_factor_cap));
    }
  }
  return cache;
}

void require_searchable(const PolySeq& seq) {
  seq.validate();
  bool any = false;
  for (const Poly& p : seq.polys) {
    if (!p.integer_coefficients())
      throw InputError(
          "polynomial coefficients must be integers; apply a normalization "
          "(clear_lcm, a user guess function, or an exponential rescale) first");
    any = any || !p.is_zero();
  }
  if (!any) throw InputError("every polynomial in the sequence is zero");
}

void validate_options(const SearchOptions& opts) {
  if (opts.sequence_factors.empty()) throw InputError("at least one sequence factor is required");
  if (opts.triangular_sequence_num_rows < 1)
    throw InputError("triangular_sequence_num_rows must be positive");
  if (opts.per_slot_factor_cap < 1) throw InputError("per_slot_factor_cap must be positive");
  if (opts.result_cap < 1) throw InputError("result_cap must be positive");
  if (opts.budget_ms_per_template < 0) throw InputError("budget_ms_per_template must be >= 0");
  if (opts.num_workers < 1) throw InputError("num_workers must be positive");
}

// One slope tuple, all j0 probes, both remainder assignments.
std::vector<Formula> run_template(const PolySeq& seq, const SlopeTuple& slopes,
                                  const Tables& tables, const SearchOptions& opts,
                                  const DecompCache& cache, SearchDiagnostics& diag) {
  const Deadline deadline = Deadline::after_ms(opts.budget_ms_per_template);
  std::vector<Formula> found;
  std::set<std::string> seen;
  std::set<std::string> seen_remainders;
  const FormulaNames names = names_for(seq);

  auto consider = [&](Formula f) {
    if (!verify_with_tables(f, seq, tables)) return;
    std::string key = formula_key(f);
    if (!seen.insert(key).second) return;
    found.push_back(std::move(f));
  };

  try {
    for (long j0 : probe_list(opts)) {
      auto rows_opt = prepare_rows(seq, j0);
      if (!rows_opt) continue;
      const std::vector<PreparedRow>& rows = *rows_opt;

      // Row solutions for every informative row; rows whose anchor cannot be
      // decomposed stay out of the base set and are validated by prediction.
      std::vector<std::vector<RowSolution>> sols(rows.size());
      std::vector<std::size_t> base_candidates;
      for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        if (rows[ri].nonzero.empty()) continue;
        sols[ri] =
            derive_row_solutions(rows[ri], slopes, tables, cache, deadline, diag.range_pruned);
        if (!sols[ri].empty()) base_candidates.push_back(ri);
      }
      if (base_candidates.empty()) continue;
      std::stable_sort(base_candidates.begin(), base_candidates.end(),
                       [&](std::size_t a, std::size_t b) {
                         return sols[a].size() < sols[b].size();
                       });
      std::vector<std::size_t> base_rows(
          base_candidates.begin(),
          base_candidates.begin() + std::min<std::size_t>(3, base_candidates.size()));

      std::set<std::string> seen_chains;
      std::vector<const RowSolution*> picks(base_rows.size(), nullptr);

      auto process_chain = [&](const Chain& chain) {
        for (bool by_s : {false, true}) {
          check_deadline(deadline);
          auto values = collect_remainders(rows, chain, by_s, j0);
          if (!values || values->empty()) continue;
          auto [start, window] = contiguous_window(*values);
          auto forms = recognize_sequence(window, start, opts.recognizer);
          if (forms.empty()) {
            std::vector<Int> ints;
            ints.reserve(window.size());
            for (const auto& v : window) ints.push_back(v.get_num());
            std::ostringstream os;
            for (const auto& v : ints) os << v << ',';
            if (seen_remainders.insert(os.str()).second)
              diag.unrecognized_remainders.push_back(std::move(ints));
            continue;
          }
          for (const ClosedForm& form : forms) {
            Formula f;
            f.factors.resize(tables.size());
            for (std::size_t t = 0; t < tables.size(); ++t) {
              f.factors[t].triangle = tables[t]->spec();
              f.factors[t].upper = chain.upper[t];
              f.factors[t].upper_slope = slopes[t].u;
              f.factors[t].lower = chain.lower[t];
              f.factors[t].lower_slope = slopes[t].l;
            }
            // Constant remainders always live on the rs1 side so the two
            // assignments collapse to one formula.
            if (!by_s || form.kind == ClosedForm::Kind::Const) {
              f.rs1 = form;
            } else {
              f.rs2 = form;
            }
            f.j0 = j0;
            f.num_rows = opts.triangular_sequence_num_rows;
            f.names = names;
            f.normalization = seq.provenance;
            consider(std::move(f));
          }
        }
      };

      auto descend = [&](auto&& self, std::size_t depth) -> void {
        if (depth == base_rows.size()) {
          check_deadline(deadline);
          bool saw_range = false;
          auto chain = try_chain(rows, slopes, tables, base_rows, picks, saw_range);
          if (saw_range) diag.range_pruned = true;
          if (!chain) return;
          if (!seen_chains.insert(chain_signature(chain->upper, chain->lower)).second) return;
          process_chain(*chain);
          return;
        }
        for (const RowSolution& sol : sols[base_rows[depth]]) {
          check_deadline(deadline);
          picks[depth] = &sol;
          // For any integer polynomial q, (j2 - j1) divides q(j2) - q(j1),
          // so pairwise divisibility against the first pick prunes early.
          if (depth > 0) {
            const long dj = rows[base_rows[depth]].j - rows[base_rows[0]].j;
            bool ok = true;
            for (std::size_t t = 0; t < tables.size() && ok; ++t) {
              ok = (sol.base[t].un - picks[0]->base[t].un) % dj == 0 &&
                   (sol.base[t].ln - picks[0]->base[t].ln) % dj == 0;
            }
            if (!ok) continue;
          }
          self(self, depth + 1);
        }
      };
      descend(descend, 0);
    }
  } catch (const BudgetExceeded&) {
    diag.budget_exceeded = true;
  }

  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::string> keys(found.size());
  std::vector<int> complexity(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    keys[i] = formula_key(found[i]);
    complexity[i] = formula_complexity(found[i]);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (complexity[a] != complexity[b]) return complexity[a] < complexity[b];
    if (found[a].j0 != found[b].j0) return found[a].j0 < found[b].j0;
    return keys[a] < keys[b];
  });
  std::vector<Formula> ordered;
  ordered.reserve(found.size());
  for (std::size_t i : order) ordered.push_back(std::move(found[i]));
  return ordered;
}

bool sequence_is_i_varying(const PolySeq& seq) {
  for (const Poly& p : seq.polys) {
    if (p.is_zero()) continue;
    const auto dense = p.dense_coefficients();
    for (const auto& c : dense) {
      if (c != dense.front()) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<SlopeTuple> enumerate_templates(const SearchOptions& opts, bool i_varying) {
  const std::size_t r = opts.sequence_factors.size();
  if (r == 0) return {};
  if (opts.index_offset_pairs) {
    for (const SlopeTuple& tuple : *opts.index_offset_pairs) {
      if (tuple.size() != r)
        throw InputError("each index offset tuple must supply one (u, l) pair per factor");
    }
    return *opts.index_offset_pairs;
  }
  if (opts.index_multiples.empty()) throw InputError("index_multiples must not be empty");
  std::vector<long> mult;
  for (long m : opts.index_multiples) {
    if (std::find(mult.begin(), mult.end(), m) == mult.end()) mult.push_back(m);
  }
  std::vector<SlotSlopes> pairs;
  pairs.reserve(mult.size() * mult.size());
  for (long u : mult) {
    for (long l : mult) pairs.push_back({u, l});
  }
  std::vector<SlopeTuple> out;
  std::vector<std::size_t> idx(r, 0);
  for (;;) {
    SlopeTuple tuple;
    tuple.reserve(r);
    bool all_zero = true;
    for (std::size_t t = 0; t < r; ++t) {
      tuple.push_back(pairs[idx[t]]);
      all_zero = all_zero && pairs[idx[t]].u == 0 && pairs[idx[t]].l == 0;
    }
    if (!(all_zero && r == 1 && i_varying)) out.push_back(std::move(tuple));
    std::size_t s = r;
    while (s > 0) {
      if (++idx[s - 1] < pairs.size()) break;
      idx[s - 1] = 0;
      --s;
    }
    if (s == 0) break;
  }
  return out;
}

std::vector<Formula> search_with_template(const PolySeq& seq, const SlopeTuple& slopes,
                                          const Tables& tables, const SearchOptions& opts,
                                          SearchDiagnostics& diag) {
  require_searchable(seq);
  if (slopes.size() != tables.size())
    throw InputError("slope tuple length must match the number of factor tables");
  DecompCache cache = build_decomp_cache(seq, tables, opts);
  return run_template(seq, slopes, tables, opts, cache, diag);
}

GuessResult guess_polynomial_sequence(const PolySeq& seq, const SearchOptions& opts) {
  validate_options(opts);
  require_searchable(seq);

  GuessResult result;
  Tables tables;
  tables.reserve(opts.sequence_factors.size());
  for (const TriangleSpec& spec : opts.sequence_factors)
    tables.push_back(build_triangle(spec, opts.triangular_sequence_num_rows));

  const DecompCache cache = build_decomp_cache(seq, tables, opts);
  const std::vector<SlopeTuple> units = enumerate_templates(opts, sequence_is_i_varying(seq));

  std::vector<std::vector<Formula>> per_unit(units.size());
  std::vector<SearchDiagnostics> per_diag(units.size());
  auto run_unit = [&](std::size_t u) {
    per_unit[u] = run_template(seq, units[u], tables, opts, cache, per_diag[u]);
  };
  if (opts.num_workers <= 1 || units.size() <= 1) {
    for (std::size_t u = 0; u < units.size(); ++u) run_unit(u);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t u = next.fetch_add(1);
        if (u >= units.size()) break;
        run_unit(u);
      }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min<std::size_t>(opts.num_workers, units.size());
    pool.reserve(n);
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::set<std::string> seen;
  std::set<std::string> seen_remainders;
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (Formula& f : per_unit[u]) {
      if (!seen.insert(formula_key(f)).second) continue;
      result.formulas.push_back(std::move(f));
    }
    result.diagnostics.budget_exceeded |= per_diag[u].budget_exceeded;
    result.diagnostics.range_pruned |= per_diag[u].range_pruned;
    for (auto& w : per_diag[u].warnings) result.diagnostics.warnings.push_back(std::move(w));
    for (auto& rem : per_diag[u].unrecognized_remainders) {
      std::ostringstream os;
      for (const auto& v : rem) os << v << ',';
      if (seen_remainders.insert(os.str()).second)
        result.diagnostics.unrecognized_remainders.push_back(std::move(rem));
    }
  }
  if (result.formulas.size() > static_cast<std::size_t>(opts.result_cap))
    result.formulas.resize(opts.result_cap);

  if (result.formulas.empty()) {
    if (static_cast<long>(seq.size()) < opts.min_terms_warn) {
      result.diagnostics.warnings.push_back(
          "only " + std::to_string(seq.size()) + " polynomial(s) were provided; at least " +
          std::to_string(opts.min_terms_warn) +
          " initial terms are recommended before trusting a no-match result");
    }
    if (result.diagnostics.range_pruned) {
      result.diagnostics.warnings.push_back(
          "candidates were pruned at the " +
          std::to_string(opts.triangular_sequence_num_rows) +
          "-row triangle band; retry with a larger triangular_sequence_num_rows");
    }
  }
  return result;
}

bool verify_formula(const Formula& formula, const PolySeq& seq) {
  TableCache cache;
  return verify_formula(formula, seq, cache);
}

bool verify_formula(const Formula& formula, const PolySeq& seq, TableCache& cache) {
  try {
    seq.validate();
    Tables tables;
    tables.reserve(formula.factors.size());
    for (const auto& ft : formula.factors)
      tables.push_back(cache.get(ft.triangle, formula.num_rows));
    return verify_with_tables(formula, seq, tables);
  } catch (const Error&) {
    return false;
  }
}

Poly formula_polynomial(const Formula& formula, long j, TableCache& cache) {
  Poly out(formula.names.variable);
  const long width = j + formula.j0 + 1;
  for (long i = 0; i < width; ++i) {
    Rational term(1);
    bool zero = false;
    for (const auto& ft : formula.factors) {
      const long n = ft.upper.at(j) + ft.upper_slope * i;
      const long k = ft.lower.at(j) + ft.lower_slope * i;
      if (n < 0 || k < 0 || k > n) {
        zero = true;
        break;
      }
      auto table = cache.at_least(ft.triangle, static_cast<int>(n) + 1);
      term *= Rational(table->entry(static_cast<int>(n), static_cast<int>(k)));
    }
    if (zero) continue;
    term *= evaluate_closed_form(formula.rs1, i);
    term *= evaluate_closed_form(formula.rs2, j + formula.j0 - i);
    if (term != 0) out.set_coefficient(i, out.coefficient(i) + term);
  }
  return out;
}

}  // namespace polyguess
