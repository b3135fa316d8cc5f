#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpx/algebra.hpp"

using namespace fpx;
using namespace fpx::algebra;

namespace {
Elem E(std::initializer_list<long> v) {
  Elem e;
  for (long x : v) e.emplace_back(x);
  return e;
}
}  // namespace

TEST_CASE("polynomial parsing and printing") {
  IntPolynomial p = IntPolynomial::parse("x^2+3x-1");
  CHECK(p.degree() == 2);
  CHECK(p.c[0] == -1);
  CHECK(p.c[1] == 3);
  CHECK(p.c[2] == 1);
  CHECK(p.str() == "x^2 + 3x - 1");

  IntPolynomial q = IntPolynomial::parse("2x^2 - 4x + 1");
  CHECK(q.c[0] == 1);
  CHECK(q.c[1] == -4);
  CHECK(q.c[2] == 2);
  CHECK(q.str() == "2x^2 - 4x + 1");
  CHECK_FALSE(q.is_monic());

  CHECK(IntPolynomial::parse("x").str() == "x");
  CHECK(IntPolynomial::parse("-x+5").str() == "-x + 5");
  CHECK(IntPolynomial::parse("7").degree() == 0);
  CHECK(IntPolynomial::parse("x^4-2x^3+4x^2-3x+1").str() == "x^4 - 2x^3 + 4x^2 - 3x + 1");
  CHECK_THROWS_AS(IntPolynomial::parse("x^"), Error);
  CHECK_THROWS_AS(IntPolynomial::parse("y+1"), Error);
}

TEST_CASE("polynomial arithmetic") {
  IntPolynomial a = IntPolynomial::parse("x^2+3x-1");
  IntPolynomial b = IntPolynomial::parse("x^3+x-1");
  IntPolynomial r = IntPolynomial::parse("x+7");
  IntPolynomial n = a * b + r;
  auto [q, rem] = divmod_monic(n, b);
  CHECK(q == a);
  CHECK(rem == r);

  IntPolynomial c = compose(IntPolynomial::parse("x^2-2"), IntPolynomial::parse("2-x"));
  CHECK(c == IntPolynomial::parse("x^2-4x+2"));

  IntPolynomial rev = reversed(IntPolynomial::parse("x^2+3x-2"));
  CHECK(rev == IntPolynomial::parse("-2x^2+3x+1"));

  CHECK(IntPolynomial::parse("x^3-1").derivative() == IntPolynomial::parse("3x^2"));
  CHECK(a.eval(Rat(2)) == Rat(9));
  CHECK(a.eval_int(Int(-1)) == Int(-3));
}

TEST_CASE("cyclotomic polynomials and the totient") {
  CHECK(cyclotomic_polynomial(1) == IntPolynomial::parse("x-1"));
  CHECK(cyclotomic_polynomial(2) == IntPolynomial::parse("x+1"));
  CHECK(cyclotomic_polynomial(5) == IntPolynomial::parse("x^4+x^3+x^2+x+1"));
  CHECK(cyclotomic_polynomial(6) == IntPolynomial::parse("x^2-x+1"));
  CHECK(cyclotomic_polynomial(8) == IntPolynomial::parse("x^4+1"));
  CHECK(cyclotomic_polynomial(10) == IntPolynomial::parse("x^4-x^3+x^2-x+1"));
  CHECK(cyclotomic_polynomial(12) == IntPolynomial::parse("x^4-x^2+1"));
  CHECK(euler_phi(10) == 4);
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(198) == 60);
}

TEST_CASE("interval primitives") {
  RationalInterval a(Rat(1), Rat(2)), b(Rat(-3), Rat(-1));
  CHECK((a * b).lo == Rat(-6));
  CHECK((a * b).hi == Rat(-1));
  CHECK((a / b).lo == Rat(-2));
  CHECK((a / b).hi == Rat(-1, 3));
  RationalInterval z(Rat(-1), Rat(2));
  CHECK(z.square().lo == Rat(0));
  CHECK(z.square().hi == Rat(4));
  CHECK(z.contains_zero());
  CHECK(*RationalInterval(Rat(1, 7), Rat(3)).sign() == 1);
  CHECK_FALSE(z.sign().has_value());

  RationalInterval s = sqrt_outer(RationalInterval(Rat(2), Rat(2)), 40);
  CHECK(s.lo * s.lo <= Rat(2));
  CHECK(s.hi * s.hi >= Rat(2));
  CHECK(s.width() <= Rat(1, Int(1) << 38));

  RationalInterval rounded = RationalInterval(Rat(1, 3), Rat(2, 3)).round_out(8);
  CHECK(rounded.lo <= Rat(1, 3));
  CHECK(rounded.hi >= Rat(2, 3));
  CHECK(rounded.width() <= Rat(1, 3) + Rat(2, 256));
}

TEST_CASE("field context rejects bad minimal polynomials") {
  CHECK_THROWS_AS(NumberFieldContext::make(IntPolynomial::parse("2x^2-4x+1")), Error);
  CHECK_THROWS_AS(NumberFieldContext::make(IntPolynomial::parse("x^2-1")), Error);
  CHECK_THROWS_AS(NumberFieldContext::make(IntPolynomial::parse("x^2+2x+1")), Error);
  // Product of two irreducible quadratics: only the subset search can see it.
  CHECK_THROWS_AS(NumberFieldContext::make(IntPolynomial::parse("x^4+3x^3-4x^2-6x+4")), Error);
  CHECK_THROWS_AS(NumberFieldContext::make(IntPolynomial::parse("5")), Error);
}

TEST_CASE("quadratic context roots and designation") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"));
  CHECK(ctx.degree() == 2);
  CHECK(ctx.root_count() == 2);
  CHECK(ctx.root_is_real(0));
  CHECK(ctx.root_is_real(1));
  // Default designation picks the largest modulus: (-3-sqrt(17))/2.
  CHECK(ctx.lambda_index() == 0);
  CHECK(ctx.lambda_is_real());
  double lam = ctx.approx_at(ctx.to_q(ctx.lambda()), ctx.lambda_index());
  CHECK(lam == doctest::Approx(-3.5615528128088303).epsilon(1e-12));
  auto win = ctx.real_unit_interval_indices();
  REQUIRE(win.size() == 1);
  CHECK(win[0] == 1);
  double mu = ctx.approx_at(ctx.to_q(ctx.lambda()), win[0]);
  CHECK(mu == doctest::Approx(0.5615528128088303).epsilon(1e-12));

  auto hinted = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"), {{0.56, 0.0}});
  CHECK(hinted.lambda_index() == 1);
}

TEST_CASE("cubic context separates the window root from the complex pair") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^3+x^2-1"));
  CHECK(ctx.degree() == 3);
  auto reals = ctx.real_root_indices();
  REQUIRE(reals.size() == 1);
  auto win = ctx.real_unit_interval_indices();
  REQUIRE(win.size() == 1);
  double mu = ctx.approx_at(ctx.to_q(ctx.lambda()), win[0]);
  CHECK(mu == doctest::Approx(0.7548776662466928).epsilon(1e-12));
  CHECK_FALSE(ctx.lambda_is_real());
  int li = ctx.lambda_index();
  int lc = ctx.conjugate_index(li);
  CHECK(lc != li);
  CHECK(ctx.conjugate_index(lc) == li);
  RationalInterval m = ctx.abs_lambda(ctx.lambda(), Rat(1, Int(1) << 40));
  CHECK(rat_to_double(m.lo) == doctest::Approx(1.1509639252).epsilon(1e-9));
}

TEST_CASE("ring arithmetic against schoolbook reduction") {
  IntPolynomial p = IntPolynomial::parse("x^4-2x^3+4x^2-3x+1");
  auto ctx = NumberFieldContext::make(p);
  // lambda^4 reduced independently by polynomial division.
  IntPolynomial x4;
  x4.c.assign(5, Int(0));
  x4.c[4] = 1;
  IntPolynomial rem = divmod_monic(x4, p).second;
  Elem viaring = ctx.pow(ctx.lambda(), 4);
  REQUIRE(rem.c.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(viaring[k] == rem.c[k]);
  CHECK(viaring == E({-1, 3, -4, 2}));

  // Random-ish product cross-check through polynomial division.
  Elem a = E({3, -2, 0, 5}), b = E({-1, 4, 7, 2});
  IntPolynomial pa, pb;
  pa.c.assign(a.begin(), a.end());
  pb.c.assign(b.begin(), b.end());
  pa.normalize();
  pb.normalize();
  IntPolynomial prod = divmod_monic(pa * pb, p).second;
  Elem viactx = ctx.mul(a, b);
  for (int k = 0; k < 4; ++k) CHECK(viactx[k] == (k < (int)prod.c.size() ? prod.c[k] : Int(0)));

  CHECK(ctx.mul_lambda(a) == ctx.mul(a, ctx.lambda()));
  CHECK(ctx.pow(ctx.lambda(), 0) == ctx.one());
  CHECK(ctx.add(a, ctx.neg(a)) == ctx.zero());
}

TEST_CASE("norms and units in the sqrt(17) order") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"));
  CHECK(ctx.norm(ctx.lambda()) == -2);
  CHECK(ctx.norm(E({1, -2})) == -1);
  CHECK(ctx.norm(E({9, -16})) == 1);
  CHECK(ctx.norm(ctx.one()) == 1);
  CHECK(ctx.norm(ctx.zero()) == 0);
  // (1 - 2*lambda)^2 == 9 - 16*lambda.
  CHECK(ctx.mul(E({1, -2}), E({1, -2})) == E({9, -16}));

  Elem out;
  CHECK(ctx.divide(ctx.one(), E({1, -2}), out));
  CHECK(out == E({-7, -2}));
  CHECK(ctx.mul(out, E({1, -2})) == ctx.one());
  CHECK_FALSE(ctx.divide(ctx.one(), ctx.from_int(2), out));

  QElem inv = ctx.qinverse(ctx.to_q(ctx.lambda()));
  CHECK(inv[0] == Rat(3, 2));
  CHECK(inv[1] == Rat(1, 2));
  CHECK(ctx.qmul(ctx.to_q(ctx.lambda()), inv) == ctx.to_q(ctx.one()));
}

TEST_CASE("characteristic polynomial certifies a unit-modulus element") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^4-2x^3+4x^2-3x+1"));
  Elem target = E({0, 2, -1, 1});
  CHECK(ctx.element_charpoly(target) == cyclotomic_polynomial(10));
  CHECK(ctx.pow(target, 5) == ctx.from_int(-1));
  CHECK(ctx.pow(target, 10) == ctx.one());
  CHECK(ctx.element_charpoly(ctx.lambda()) == ctx.minpoly());
  // Norm agrees with the characteristic polynomial at zero.
  CHECK(ctx.norm(target) == ctx.element_charpoly(target).c[0]);
}

TEST_CASE("exact signs, comparisons, floors") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-1"));
  auto win = ctx.real_unit_interval_indices();
  REQUIRE(win.size() == 1);
  int mu = win[0];
  CHECK(ctx.sign_at(E({1, -3}), mu) == 1);   // 1 - 3*mu ~ 0.0917
  CHECK(ctx.sign_at(E({109, -360}), mu) == 1);  // ~ 7.4e-4
  CHECK(ctx.sign_at(E({-109, 360}), mu) == -1);
  CHECK(ctx.sign_at(ctx.zero(), mu) == 0);

  CHECK(ctx.cmp_abs_lambda(ctx.lambda(), Rat(33, 10)) == 1);
  CHECK(ctx.cmp_abs_lambda(ctx.lambda(), Rat(34, 10)) == -1);
  CHECK(ctx.cmp_abs_lambda(ctx.zero(), Rat(1)) == -1);

  Elem b5 = ctx.mul_int(ctx.lambda(), 5);
  CHECK(ctx.ceil_value(b5, mu) == 2);   // 5*mu ~ 1.514
  CHECK(ctx.floor_value(b5, mu) == 1);
  int lam = ctx.lambda_index();
  CHECK(ctx.floor_value(b5, lam) == -17);  // 5*lambda ~ -16.514
  CHECK(ctx.ceil_value(b5, lam) == -16);
  CHECK(ctx.floor_value(ctx.from_int(4), mu) == 4);
}

TEST_CASE("unit-modulus tie reporting for complex comparisons") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^4-2x^3+4x^2-3x+1"));
  // Designate the ending element of the reduction chain directly: its value
  // at every root has modulus exactly 1, so the comparison reports a tie.
  Elem target = E({0, 2, -1, 1});
  CHECK(ctx.cmp_abs_lambda(target, Rat(9, 10)) == 1);
  CHECK(ctx.cmp_abs_lambda(target, Rat(11, 10)) == -1);
  CHECK(ctx.cmp_abs_lambda(target, Rat(1)) == 0);
}

TEST_CASE("element rendering") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"));
  CHECK(ctx.elem_str(E({9, -16})) == "9 - 16*lambda");
  CHECK(ctx.elem_str(E({1, -2})) == "1 - 2*lambda");
  CHECK(ctx.elem_str(E({-1, -2})) == "-1 - 2*lambda");
  CHECK(ctx.elem_str(E({0, 1})) == "lambda");
  CHECK(ctx.elem_str(E({0, 0})) == "0");
  CHECK(ctx.elem_str(E({5, 0})) == "5");
  auto quartic = NumberFieldContext::make(IntPolynomial::parse("x^4-2x^3+4x^2-3x+1"));
  CHECK(quartic.elem_str(E({0, 2, -1, 1})) == "2*lambda - lambda^2 + lambda^3");
}

TEST_CASE("continued fractions of quadratic surds") {
  auto ctx = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"), {{0.56, 0.0}});
  auto cf = surd_continued_fraction(ctx, ctx.lambda(), ctx.lambda_index());
  REQUIRE(cf.preperiod.size() == 1);
  CHECK(cf.preperiod[0] == 0);
  REQUIRE(cf.period.size() == 3);
  CHECK(cf.period[0] == 1);
  CHECK(cf.period[1] == 1);
  CHECK(cf.period[2] == 3);
  auto conv = convergents(cf, 8);
  REQUIRE(conv.size() == 8);
  CHECK(conv[3].p == 4);
  CHECK(conv[3].q == 7);
  CHECK(conv[7].p == 41);
  CHECK(conv[7].q == 73);

  auto ctx13 = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-1"), {{0.30, 0.0}});
  auto cf13 = surd_continued_fraction(ctx13, ctx13.lambda(), ctx13.lambda_index());
  REQUIRE(cf13.preperiod.size() == 1);
  CHECK(cf13.preperiod[0] == 0);
  REQUIRE(cf13.period.size() == 1);
  CHECK(cf13.period[0] == 3);

  // Negative value: lambda at the outer root of x^2+3x-2 is about -3.56.
  auto outer = NumberFieldContext::make(IntPolynomial::parse("x^2+3x-2"));
  auto cfneg = surd_continued_fraction(outer, outer.lambda(), outer.lambda_index());
  CHECK(cfneg.preperiod[0] == -4);  // floor(-3.5615) = -4

  // Rational values have an empty period.
  auto lin = NumberFieldContext::make(IntPolynomial::parse("x-5"));
  auto cfr = surd_continued_fraction(lin, lin.lambda(), 0);
  CHECK(cfr.preperiod.size() == 1);
  CHECK(cfr.preperiod[0] == 5);
  CHECK(cfr.period.empty());
}

TEST_CASE("logarithm enclosures") {
  Rat eps(1, Int(1) << 50);
  RationalInterval l2 = log_interval(Rat(2), eps);
  // ln 2 lies strictly between these two 18-digit rationals.
  Rat below(Int("693147180559945309"), Int("1000000000000000000"));
  Rat above(Int("693147180559945310"), Int("1000000000000000000"));
  CHECK(l2.lo < above);
  CHECK(l2.hi > below);
  CHECK(l2.width() <= eps);
  CHECK(l2.lo > Rat(693147180, Int(1000000000)));
  CHECK(l2.hi < Rat(693147181, Int(1000000000)));
  RationalInterval lh = log_interval(Rat(1, 4), Rat(1, 1 << 20));
  CHECK(lh.hi < Rat(-138629, 100000));
  CHECK(lh.lo > Rat(-138630, 100000));
}

TEST_CASE("cyclotomic context pairs conjugates") {
  auto ctx = NumberFieldContext::make(cyclotomic_polynomial(12));
  CHECK(ctx.degree() == 4);
  CHECK(ctx.real_root_indices().empty());
  for (int i = 0; i < 4; ++i) {
    int j = ctx.conjugate_index(i);
    CHECK(j != i);
    CHECK(ctx.conjugate_index(j) == i);
  }
  // Norm of (1 - zeta) over the 12th cyclotomic field: evaluates Phi_12 at 1.
  Elem one_minus_z = ctx.sub(ctx.one(), ctx.lambda());
  CHECK(ctx.norm(one_minus_z) == cyclotomic_polynomial(12).eval_int(Int(1)));
}
