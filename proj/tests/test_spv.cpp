#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpx/spv.hpp"

using namespace fpx;
using namespace fpx::spv;
using algebra::IntPolynomial;
using algebra::NumberFieldContext;

TEST_CASE("direct classification") {
  Classification c = classify(IntPolynomial::parse("x^2+3x-2"));
  CHECK(c.verdict == Verdict::spv_nontrivial);
  CHECK(c.k == 1);
  CHECK(c.integral);
  REQUIRE(c.window_values.size() == 1);
  CHECK(c.window_values[0] == doctest::Approx(0.5615528128).epsilon(1e-9));
  CHECK(c.lambda_re == doctest::Approx(-3.5615528128).epsilon(1e-9));

  CHECK(classify(IntPolynomial::parse("x-1")).verdict == Verdict::spv_trivial);
  CHECK(classify(IntPolynomial::parse("x-20")).verdict == Verdict::spv_trivial);
  CHECK(classify(IntPolynomial::parse("x^2-2")).verdict == Verdict::not_spv);
  CHECK(classify(IntPolynomial::parse("x^2-3x+1")).verdict == Verdict::spv_nontrivial);
  // Quartic with a complex designated root and complex non-window conjugates.
  CHECK(classify(IntPolynomial::parse("x^4-2x^3+4x^2-3x+1")).verdict == Verdict::not_spv);
  // Not an algebraic integer.
  Classification nm = classify(IntPolynomial::parse("2x^2-4x+1"));
  CHECK(nm.verdict == Verdict::not_spv);
  CHECK_FALSE(nm.integral);

  CHECK(classify_rational(Rat(5)).verdict == Verdict::spv_trivial);
  CHECK(classify_rational(Rat(1, 2)).verdict == Verdict::not_spv);
  CHECK_FALSE(classify_rational(Rat(1, 2)).integral);
}

TEST_CASE("quadratic family canonical members") {
  auto e11 = quadratic_family(1, 1);
  CHECK(e11.cls.verdict == Verdict::spv_nontrivial);
  CHECK(e11.cls.k == 1);
  CHECK(e11.lambda_value == doctest::Approx(-1.6180339887).epsilon(1e-9));

  CHECK(quadratic_family(2, 1).lambda_value == doctest::Approx(-2.4142135624).epsilon(1e-9));
  CHECK(quadratic_family(2, 2).lambda_value == doctest::Approx(-2.7320508076).epsilon(1e-9));
  CHECK(quadratic_family(3, 1).lambda_value == doctest::Approx(-3.3027756377).epsilon(1e-9));
  CHECK(quadratic_family(3, 2).lambda_value == doctest::Approx(-3.5615528128).epsilon(1e-9));

  CHECK_THROWS_AS(quadratic_family(1, 2), Error);
  CHECK_THROWS_AS(quadratic_family(3, 0), Error);
  CHECK_THROWS_AS(quadratic_family(0, 0), Error);
}

TEST_CASE("cubic sign-pattern criteria") {
  CubicCriterion c1 = cubic_criterion(1, 0, -1);  // x^3 + x^2 - 1
  CHECK(c1.nonreal_mode);
  CHECK_FALSE(c1.real_least_mode);
  CHECK(c1.discriminant == -23);
  REQUIRE(c1.cls.has_value());
  CHECK(c1.cls->verdict == Verdict::spv_nontrivial);
  CHECK(c1.cls->k == 1);
  CHECK_FALSE(c1.cls->ctx->lambda_is_real());
  CHECK(c1.cls->window_values[0] == doctest::Approx(0.7548776662).epsilon(1e-9));

  CubicCriterion c2 = cubic_criterion(0, 1, -1);  // x^3 + x - 1
  CHECK(c2.nonreal_mode);
  CHECK(c2.discriminant == -31);
  REQUIRE(c2.cls.has_value());
  CHECK(c2.cls->verdict == Verdict::spv_nontrivial);
  CHECK(c2.cls->window_values[0] == doctest::Approx(0.6823278038).epsilon(1e-9));

  CubicCriterion c3 = cubic_criterion(3, -4, 1);  // all roots real
  CHECK(c3.real_least_mode);
  CHECK_FALSE(c3.nonreal_mode);
  CHECK(c3.discriminant == 49);
  REQUIRE(c3.cls.has_value());
  CHECK(c3.cls->verdict == Verdict::spv_nontrivial);
  CHECK(c3.cls->k == 2);
  CHECK(c3.cls->ctx->lambda_is_real());
  CHECK(c3.cls->lambda_re < -1.0);

  // Reducible cubics never pass either pattern: a monic integer factor would
  // need an integer root, excluded by the p(0), p(1) sign constraints.
  CHECK_FALSE(cubic_criterion(-2, 2, -1).nonreal_mode);   // (x-1)(x^2-x+1)
  CHECK_FALSE(cubic_criterion(-1, -3, 2).real_least_mode);  // (x-2)(x^2+x-1)

  CubicCriterion none = cubic_criterion(0, 0, 1);
  CHECK_FALSE(none.nonreal_mode);
  CHECK_FALSE(none.real_least_mode);
  CHECK_FALSE(none.cls.has_value());
  CHECK(cubic_criterion(0, 0, -2).nonreal_mode == false);  // a+b+c < 0
}

TEST_CASE("lambda_n minimal polynomials") {
  CHECK(lambda_n(3).minpoly == IntPolynomial::parse("x-1"));
  CHECK(lambda_n(4).minpoly == IntPolynomial::parse("2x^2-4x+1"));
  CHECK(lambda_n(5).minpoly == IntPolynomial::parse("x^2-3x+1"));
  CHECK(lambda_n(6).minpoly == IntPolynomial::parse("x^2-4x+1"));
  CHECK(lambda_n(7).minpoly == IntPolynomial::parse("x^3-6x^2+5x-1"));
  CHECK(lambda_n(9).minpoly == IntPolynomial::parse("x^3-9x^2+6x-1"));
  CHECK(lambda_n(15).minpoly == IntPolynomial::parse("x^4-24x^3+26x^2-9x+1"));

  CHECK(lambda_n(3).verdict == Verdict::spv_trivial);
  CHECK(lambda_n(4).verdict == Verdict::not_spv);
  CHECK_FALSE(lambda_n(4).integral);
  CHECK(lambda_n(5).verdict == Verdict::spv_nontrivial);
  CHECK(lambda_n(5).k == 1);
  CHECK(lambda_n(6).verdict == Verdict::spv_nontrivial);
  CHECK(lambda_n(6).k == 1);
  CHECK(lambda_n(7).verdict == Verdict::spv_nontrivial);
  CHECK(lambda_n(7).k == 2);
  CHECK(lambda_n(9).k == 2);
  CHECK(lambda_n(15).k == 3);
  CHECK(lambda_n(11).verdict == Verdict::not_spv);
  CHECK_FALSE(lambda_n(11).violating_residues.empty());

  CHECK(lambda_n(5).value == doctest::Approx(2.6180339887).epsilon(1e-9));
  CHECK(lambda_n(6).value == doctest::Approx(3.7320508076).epsilon(1e-9));
}

TEST_CASE("odd-n sweep matches the residue test") {
  std::vector<int> hits = lambda_n_spv_sweep(3, 99);
  REQUIRE(hits.size() == 5);
  CHECK(hits[0] == 3);
  CHECK(hits[1] == 5);
  CHECK(hits[2] == 7);
  CHECK(hits[3] == 9);
  CHECK(hits[4] == 15);
}

TEST_CASE("residue test agrees with direct classification") {
  for (int n : {5, 7, 9, 11, 13, 15, 21, 33}) {
    LambdaN ln = lambda_n(n);
    REQUIRE(ln.integral);
    Classification direct = classify(ln.minpoly, {{ln.value, 0.0}});
    bool lemma_spv = ln.verdict != Verdict::not_spv;
    bool direct_spv = direct.verdict != Verdict::not_spv;
    CAPTURE(n);
    CHECK(lemma_spv == direct_spv);
    if (lemma_spv) CHECK(ln.k == direct.k);
  }
}

TEST_CASE("fundamental units in quadratic orders") {
  auto ctx17 = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"));
  algebra::Elem u17 = fundamental_unit(ctx17);
  REQUIRE(u17.size() == 2);
  CHECK(u17[0] == 9);
  CHECK(u17[1] == -16);
  CHECK(ctx17.norm(u17) == 1);

  auto ctx5 = NumberFieldContext::make(IntPolynomial::parse("x^2-3x+1"));
  algebra::Elem u5 = fundamental_unit(ctx5);
  CHECK(u5[0] == 0);
  CHECK(u5[1] == 1);
  CHECK(ctx5.norm(u5) == 1);

  // Smallest +1 unit in Z[sqrt(3)]: 2 + sqrt(3).
  auto ctx3 = NumberFieldContext::make(IntPolynomial::parse("x^2-3"), {{1.7, 0.0}});
  algebra::Elem u3 = fundamental_unit(ctx3);
  CHECK(u3[0] == 2);
  CHECK(u3[1] == 1);

  auto cubic = NumberFieldContext::make(IntPolynomial::parse("x^3+x^2-1"));
  CHECK_THROWS_AS(fundamental_unit(cubic), Error);
  auto gauss = NumberFieldContext::make(IntPolynomial::parse("x^2+1"));
  CHECK_THROWS_AS(fundamental_unit(gauss), Error);
}

TEST_CASE("verdict strings") {
  CHECK(verdict_str(Verdict::spv_trivial) == "sPV-trivial");
  CHECK(verdict_str(Verdict::spv_nontrivial) == "sPV-nontrivial");
  CHECK(verdict_str(Verdict::not_spv) == "not-sPV");
}
