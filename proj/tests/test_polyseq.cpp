#include <doctest.h>

#include <random>

#include "polyguess/polyseq.hpp"
#include "test_util.hpp"

using namespace polyguess;

TEST_CASE("sequence validation rejects degenerate shapes") {
  CHECK_THROWS_AS(make_polyseq({}, 1), InputError);
  CHECK_THROWS_AS(make_polyseq({parse_poly("x", "x"), parse_poly("y", "y")}, 1), InputError);
  CHECK_THROWS_AS(make_polyseq({parse_poly("x", "x")}, -1), InputError);
  PolySeq ok = make_polyseq({parse_poly("x", "x")}, 2);
  CHECK(ok.var == "x");
  CHECK(ok.index_of(0) == 2);
}

TEST_CASE("denominator clearing finds the power-sum multiplier") {
  // sum of squares below n: n^3/3 - n^2/2 + n/6
  Poly p = parse_poly("1/3*n^3 - 1/2*n^2 + 1/6*n", "n");
  PolySeq seq = make_polyseq({p}, 1);
  auto [cleared, multipliers] = clear_denominators_lcm(seq);
  REQUIRE(multipliers.size() == 1);
  CHECK(multipliers[0] == 6);
  CHECK(cleared.polys[0] == parse_poly("2*n^3 - 3*n^2 + n", "n"));
  CHECK(cleared.polys[0].integer_coefficients());
  REQUIRE(cleared.provenance.size() == 1);
  CHECK(cleared.provenance[0].kind == "clear_lcm");
}

TEST_CASE("denominator clearing leaves integer and zero polynomials alone") {
  PolySeq seq = make_polyseq({parse_poly("2*x + 1", "x"), parse_poly("0", "x")}, 1);
  auto [cleared, multipliers] = clear_denominators_lcm(seq);
  CHECK(multipliers == std::vector<Int>{1, 1});
  CHECK(cleared.polys[0] == seq.polys[0]);
  CHECK(cleared.polys[1].is_zero());
}

TEST_CASE("denominator clearing divides back to the input") {
  std::mt19937 rng(77);
  std::vector<Poly> polys;
  for (int at = 0; at < 5; ++at) {
    Poly p("q");
    for (long e = 0; e <= 4; ++e) {
      Rational c(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 6));
      c.canonicalize();
      p.set_coefficient(e, c);
    }
    polys.push_back(p);
  }
  PolySeq seq = make_polyseq(polys, 1);
  auto [cleared, multipliers] = clear_denominators_lcm(seq);
  for (std::size_t at = 0; at < polys.size(); ++at) {
    CHECK(cleared.polys[at].integer_coefficients());
    CHECK(cleared.polys[at] * (Rational(1) / Rational(multipliers[at])) == polys[at]);
  }
}

TEST_CASE("exponential normalization scales the stated coefficients") {
  // by the summation index: c_i -> i! * c_i
  PolySeq seq = make_polyseq({parse_poly("1 + x + x^2 + x^3", "x")}, 1);
  PolySeq by_i = normalize_exponential(seq, ExpNormalizeMode::ByIFactorial);
  CHECK(by_i.polys[0] == parse_poly("1 + x + 2*x^2 + 6*x^3", "x"));

  // by the sequence index at j = 0: 0! leaves the polynomial unchanged
  PolySeq at_zero = make_polyseq({parse_poly("3 + 5*x", "x")}, 0);
  CHECK(normalize_exponential(at_zero, ExpNormalizeMode::ByJFactorial).polys[0] ==
        at_zero.polys[0]);

  // both: j = 2, i = 1, c = 1/2 -> 2! * 1! * 1/2 = 1
  PolySeq both = make_polyseq({parse_poly("1/2*x", "x")}, 2);
  CHECK(normalize_exponential(both, ExpNormalizeMode::ByBoth).polys[0] ==
        parse_poly("x", "x"));
}

TEST_CASE("guess expressions parse and evaluate exactly") {
  CHECK(evaluate_guess_expr(parse_guess_expr("factorial(i)"), 9, 4) == Rational(24));
  CHECK(evaluate_guess_expr(parse_guess_expr("j^2 - i"), 5, 3) == Rational(22));
  CHECK(evaluate_guess_expr(parse_guess_expr("2^i"), 0, 5) == Rational(32));
  CHECK(evaluate_guess_expr(parse_guess_expr("1/2 * j"), 3, 0) == Rational(3, 2));
  CHECK(evaluate_guess_expr(parse_guess_expr("factorial(j - i)"), 4, 4) == Rational(1));
  CHECK(evaluate_guess_expr(parse_guess_expr("(-1)^i"), 0, 3) == Rational(-1));

  CHECK_THROWS_AS(evaluate_guess_expr(parse_guess_expr("factorial(i - 2)"), 0, 0), DomainError);
  CHECK_THROWS_AS(evaluate_guess_expr(parse_guess_expr("1/i"), 1, 0), DomainError);
  CHECK_THROWS_AS(evaluate_guess_expr(parse_guess_expr("2^(1/2)"), 0, 0), DomainError);
  CHECK_THROWS_AS(parse_guess_expr("factorial(k)"), ParseError);
  CHECK_THROWS_AS(parse_guess_expr("j +"), ParseError);
}

TEST_CASE("user guess multiplies coefficient-wise and records provenance") {
  // binomial rows times factorial(i)
  std::vector<Poly> polys;
  for (long j = 1; j <= 4; ++j) {
    std::vector<Rational> coeffs;
    for (long i = 0; i <= j; ++i) coeffs.emplace_back(binomial(j, i));
    polys.push_back(Poly::from_coefficients("n", coeffs));
  }
  PolySeq seq = make_polyseq(polys, 1);
  PolySeq scaled = apply_user_guess(seq, parse_guess_expr("factorial(i)"));
  for (long j = 1; j <= 4; ++j)
    for (long i = 0; i <= j; ++i)
      CHECK(scaled.polys[static_cast<std::size_t>(j - 1)].coefficient(i) ==
            Rational(binomial(j, i) * factorial(i)));
  REQUIRE(scaled.provenance.size() == 1);
  CHECK(scaled.provenance[0].kind == "user_guess");
  CHECK(scaled.provenance[0].detail == "factorial(i)");

  // identity guess leaves the sequence untouched
  PolySeq same = apply_user_guess(seq, parse_guess_expr("1"));
  for (std::size_t at = 0; at < seq.polys.size(); ++at) CHECK(same.polys[at] == seq.polys[at]);
}

TEST_CASE("user guesses compose multiplicatively") {
  PolySeq seq = testutil::egf_binomial_seq(4);
  PolySeq two_steps =
      apply_user_guess(apply_user_guess(seq, parse_guess_expr("factorial(i)")),
                       parse_guess_expr("j + 1"));
  PolySeq one_step = apply_user_guess(seq, parse_guess_expr("factorial(i) * (j + 1)"));
  for (std::size_t at = 0; at < seq.polys.size(); ++at)
    CHECK(two_steps.polys[at] == one_step.polys[at]);
}

TEST_CASE("the EGF fixture becomes integral under the factorial guess") {
  PolySeq seq = testutil::egf_binomial_seq(6);
  bool any_fraction = false;
  for (const Poly& p : seq.polys) any_fraction = any_fraction || !p.integer_coefficients();
  CHECK(any_fraction);
  PolySeq scaled = apply_user_guess(seq, parse_guess_expr("factorial(i)"));
  for (long j = 1; j <= 6; ++j) {
    const Poly& p = scaled.polys[static_cast<std::size_t>(j - 1)];
    CHECK(p.integer_coefficients());
    for (long i = 0; i <= j; ++i) CHECK(p.coefficient(i) == Rational(binomial(j, i)));
  }
}

TEST_CASE("a guess that divides by zero at a nonzero coefficient fails") {
  PolySeq seq = make_polyseq({parse_poly("1 + x", "x")}, 1);
  CHECK_THROWS_AS(apply_user_guess(seq, parse_guess_expr("1/i")), DomainError);
}

TEST_CASE("basis changes match the small hand examples") {
  using V = std::vector<Rational>;
  // x^2 = x + x(x-1)
  CHECK(change_basis_monomial_to_falling({Rational(0), Rational(0), Rational(1)}) ==
        V{Rational(0), Rational(1), Rational(1)});
  // constants pass through
  CHECK(change_basis_monomial_to_falling({Rational(5)}) == V{Rational(5)});
  CHECK(change_basis_falling_to_monomial({Rational(5)}) == V{Rational(5)});
  // x(x-1) = x^2 - x
  CHECK(change_basis_falling_to_monomial({Rational(0), Rational(0), Rational(1)}) ==
        V{Rational(0), Rational(-1), Rational(1)});
}

TEST_CASE("basis change round-trips random polynomials") {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> coeffs;
    std::size_t len = 1 + rng() % 11;
    for (std::size_t at = 0; at < len; ++at) {
      Rational c(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 5));
      c.canonicalize();
      coeffs.push_back(c);
    }
    auto there = change_basis_monomial_to_falling(coeffs);
    auto back = change_basis_falling_to_monomial(there);
    back.resize(coeffs.size(), Rational(0));
    CHECK(back == coeffs);
  }
}

TEST_CASE("basis change agrees with direct falling-power expansion") {
  // check sum_k out[k] * x^(k) == input polynomial at several points
  std::vector<Rational> coeffs = {Rational(2), Rational(-1), Rational(0), Rational(3)};
  auto falling = change_basis_monomial_to_falling(coeffs);
  for (long x = -3; x <= 5; ++x) {
    Rational direct(0);
    Rational base(1);
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
      direct += coeffs[e] * base;
      base *= Rational(x);
    }
    Rational via(0);
    for (std::size_t k = 0; k < falling.size(); ++k) {
      Rational fall(1);
      for (long t = 0; t < static_cast<long>(k); ++t) fall *= Rational(x - t);
      via += falling[k] * fall;
    }
    CHECK(via == direct);
  }
}
