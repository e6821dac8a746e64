#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

#include "polyguess/factorizer.hpp"
#include "test_util.hpp"

using namespace polyguess;

namespace {

using Tables = std::vector<std::shared_ptr<const TriangleTable>>;

// canonical fingerprint of a decomposition for set comparison
using Fingerprint = std::vector<long>;

Fingerprint fingerprint(const FactorDecomposition& d) {
  Fingerprint out;
  for (const auto& f : d.factors) {
    out.push_back(f.n);
    out.push_back(f.k);
  }
  out.push_back(d.remainder.get_si());
  return out;
}

// independent enumeration: nested loops over every nonzero entry per slot
std::set<Fingerprint> brute_force(const Int& value, const Tables& tables) {
  std::set<Fingerprint> out;
  std::function<void(std::size_t, Int, Fingerprint)> rec = [&](std::size_t slot, Int left,
                                                               Fingerprint acc) {
    if (slot == tables.size()) {
      acc.push_back(left.get_si());
      out.insert(std::move(acc));
      return;
    }
    const TriangleTable& t = *tables[slot];
    for (int n = 0; n < t.num_rows(); ++n)
      for (int k = 0; k <= n; ++k) {
        const Int& e = t.entry(n, k);
        if (e == 0 || !divides(e, left)) continue;
        Fingerprint next = acc;
        next.push_back(n);
        next.push_back(k);
        rec(slot + 1, div_exact(left, e), std::move(next));
      }
  };
  rec(0, value, {});
  return out;
}

Tables tables_for(std::initializer_list<BuiltinTriangle> which, int rows = 12) {
  Tables out;
  for (auto w : which) out.push_back(build_triangle(builtin_spec(w), rows));
  return out;
}

const int kNoCap = 1 << 20;

}  // namespace

TEST_CASE("single-slot decompositions match the brute-force oracle") {
  std::mt19937 rng(555);
  std::vector<Int> values;
  for (int at = 0; at < 120; ++at) {
    long v = static_cast<long>(rng() % 20001) - 10000;
    if (v == 0) v = 1;
    values.emplace_back(v);
  }
  for (auto which : {BuiltinTriangle::S1, BuiltinTriangle::S2, BuiltinTriangle::E1,
                     BuiltinTriangle::Binom, BuiltinTriangle::Binom2}) {
    Tables t = tables_for({which});
    for (const Int& v : values) {
      std::set<Fingerprint> got;
      for (const auto& d : factor_over_triangles(v, t, kNoCap)) {
        CHECK(d.factors[0].entry * d.remainder == v);
        got.insert(fingerprint(d));
      }
      auto expect = brute_force(v, t);
      CAPTURE(to_string(v));
      CAPTURE(static_cast<int>(which));
      CHECK(got == expect);
      CHECK(got.size() == factor_over_triangles(v, t, kNoCap).size());  // no duplicates
    }
  }
}

TEST_CASE("double-slot decompositions match the brute-force oracle") {
  Tables t = tables_for({BuiltinTriangle::S1, BuiltinTriangle::Binom2});
  std::mt19937 rng(556);
  for (int at = 0; at < 25; ++at) {
    long v = static_cast<long>(rng() % 8001) - 4000;
    if (v == 0) v = -16;
    std::set<Fingerprint> got;
    for (const auto& d : factor_over_triangles(Int(v), t, kNoCap)) {
      CHECK(d.factors[0].entry * d.factors[1].entry * d.remainder == v);
      got.insert(fingerprint(d));
    }
    CAPTURE(v);
    CHECK(got == brute_force(Int(v), t));
  }
}

TEST_CASE("the documented spot decompositions appear") {
  Tables t = tables_for({BuiltinTriangle::S1, BuiltinTriangle::Binom2});
  bool found = false;
  for (const auto& d : factor_over_triangles(Int(-16), t)) {
    if (d.factors[0].n == 4 && d.factors[0].k == 4 && d.factors[1].n == 4 &&
        d.factors[1].k == 1 && d.remainder == -1)
      found = true;
  }
  CHECK(found);

  Tables s2 = tables_for({BuiltinTriangle::S2});
  bool seven = false;
  for (const auto& d : factor_over_triangles(Int(7), s2))
    if (d.factors[0].n == 4 && d.factors[0].k == 2 && d.remainder == 1) seven = true;
  CHECK(seven);
}

TEST_CASE("value one over binomials lists every unit entry once") {
  Tables t = tables_for({BuiltinTriangle::Binom});
  auto ds = factor_over_triangles(Int(1), t);
  CHECK(ds.size() == 2 * 12 - 1);
  for (const auto& d : ds) {
    CHECK(d.factors[0].entry == 1);
    CHECK(d.remainder == 1);
  }
}

TEST_CASE("zero and empty inputs are rejected") {
  Tables t = tables_for({BuiltinTriangle::S1});
  CHECK_THROWS_AS(factor_over_triangles(Int(0), t), InputError);
  CHECK_THROWS_AS(factor_over_triangles(Int(4), Tables{}), InputError);
}

TEST_CASE("single-table positions carry the right remainders") {
  auto s1 = build_triangle(builtin_spec(BuiltinTriangle::S1), 12);
  auto got = positions_for_coefficient(Int(50), *s1);
  REQUIRE(!got.wildcard);
  auto has = [&](int n, int k, long rem) {
    for (const auto& item : got.items)
      if (item.n == n && item.k == k && item.remainder == rem) return true;
    return false;
  };
  CHECK(has(5, 2, 1));   // entry 50
  CHECK(has(5, 4, 5));   // entry 10
  CHECK(has(2, 1, 50));  // entry 1
  for (const auto& item : got.items) CHECK(s1->entry(item.n, item.k) * item.remainder == 50);
}

TEST_CASE("zero coefficients are wildcards") {
  auto binom = build_triangle(builtin_spec(BuiltinTriangle::Binom), 12);
  auto got = positions_for_coefficient(Int(0), *binom);
  CHECK(got.wildcard);
  CHECK(got.items.empty());
}

TEST_CASE("three over binomials includes both direct entries and unit splits") {
  auto binom = build_triangle(builtin_spec(BuiltinTriangle::Binom), 12);
  auto got = positions_for_coefficient(Int(3), *binom);
  REQUIRE(!got.wildcard);
  bool direct1 = false, direct2 = false, via_one = false;
  for (const auto& item : got.items) {
    if (item.n == 3 && item.k == 1 && item.remainder == 1) direct1 = true;
    if (item.n == 3 && item.k == 2 && item.remainder == 1) direct2 = true;
    if (item.n == 0 && item.k == 0 && item.remainder == 3) via_one = true;
  }
  CHECK(direct1);
  CHECK(direct2);
  CHECK(via_one);
}

TEST_CASE("signed entries push their sign into the remainder") {
  auto s1s = build_triangle(builtin_spec(BuiltinTriangle::S1Signed), 8);
  // -6 = entry(4,1) which stores -6: remainder +1; also 6 via |entry| with
  // remainder -1 through positive entries
  auto got = positions_for_coefficient(Int(-6), *s1s);
  bool negative_entry = false;
  for (const auto& item : got.items) {
    Int entry = s1s->entry(item.n, item.k);
    CHECK(entry * item.remainder == -6);
    if (item.n == 4 && item.k == 1) {
      CHECK(entry == -6);
      CHECK(item.remainder == 1);
      negative_entry = true;
    }
  }
  CHECK(negative_entry);
}

TEST_CASE("the per-class cap keeps a deterministic prefix") {
  Tables t = tables_for({BuiltinTriangle::Binom}, 40);
  auto full = factor_over_triangles(Int(1), t, kNoCap);
  CHECK(full.size() == 2 * 40 - 1);
  auto capped = factor_over_triangles(Int(1), t, 64);
  REQUIRE(capped.size() == 64);
  for (std::size_t at = 0; at < capped.size(); ++at) CHECK(capped[at] == full[at]);

  // repeated calls agree exactly
  auto again = factor_over_triangles(Int(1), t, 64);
  CHECK(again == capped);
}

TEST_CASE("decompositions stream in slot-major value order") {
  Tables t = tables_for({BuiltinTriangle::S2});
  auto ds = factor_over_triangles(Int(14), t);
  // divisor classes ascend: 1, 7, 14; within a class positions ascend by (n,k)
  REQUIRE(!ds.empty());
  Int last_abs(0);
  std::pair<int, int> last_pos{-1, -1};
  for (const auto& d : ds) {
    Int a = abs(d.factors[0].entry);
    if (a != last_abs) {
      CHECK(a > last_abs);
      last_abs = a;
      last_pos = {-1, -1};
    }
    std::pair<int, int> pos{d.factors[0].n, d.factors[0].k};
    CHECK(pos > last_pos);
    last_pos = pos;
  }
}
