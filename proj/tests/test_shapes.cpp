#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <functional>
#include <vector>

#include "doctest.h"
#include "fpx/error.hpp"
#include "fpx/shapes.hpp"
#include "fpx/starset.hpp"

using namespace fpx;
using algebra::Elem;
using algebra::IntPolynomial;
using algebra::QElem;
using shapes::CyclotomicContext;
using shapes::PlanarSet;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  REQUIRE(false);
  return ErrorKind::internal;
}

Elem E(std::vector<int> v) {
  Elem out;
  for (int x : v) out.emplace_back(x);
  return out;
}

std::vector<Elem> sorted(std::vector<Elem> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// The canonical image of a set under an exact planar map.
std::vector<Elem> mapped(const std::vector<Elem>& pts,
                         const std::function<Elem(const Elem&)>& f) {
  std::vector<Elem> out;
  out.reserve(pts.size());
  for (const Elem& e : pts) out.push_back(f(e));
  return sorted(std::move(out));
}

// Rotation by one vertex step about the polygon's centroid, as an exact
// affine map z -> omega*z + t.  The translation must land in the ring.
std::pair<Elem, Elem> vertex_rotation(const PlanarSet& poly) {
  const auto& f = poly.ctx.field;
  Elem omega = f.pow(f.lambda(), static_cast<unsigned>(
                                     poly.ctx.order / poly.seed.size()));
  Elem sum = f.zero();
  for (const Elem& v : poly.seed) sum = f.add(sum, v);
  QElem c = f.qscale(f.to_q(sum), Rat(1, static_cast<int>(poly.seed.size())));
  QElem t = f.qsub(c, f.qmul(f.to_q(omega), c));
  REQUIRE(algebra::NumberFieldContext::is_int_elem(t));
  return {omega, f.to_elem(t)};
}

}  // namespace

TEST_CASE("cyclotomic contexts and conjugation") {
  CyclotomicContext c5 = shapes::cyclotomic_context(5);
  CHECK(c5.order == 5);
  CHECK(c5.field.degree() == 4);
  CHECK(c5.field.minpoly() == algebra::cyclotomic_polynomial(5));

  // The designated root is e^(2*pi*i/5).
  auto [zx, zy] = shapes::shadow(c5, c5.field.lambda());
  CHECK(zx == doctest::Approx(0.309016994).epsilon(1e-9));
  CHECK(zy == doctest::Approx(0.951056516).epsilon(1e-9));

  const Elem zeta = c5.field.lambda();
  Elem zbar = shapes::conjugate(c5, zeta);
  CHECK(c5.field.mul(zeta, zbar) == c5.field.one());  // |zeta|^2 = 1
  CHECK(shapes::conjugate(c5, zbar) == zeta);
  CHECK(shapes::conjugate(c5, c5.field.from_int(7)) == c5.field.from_int(7));
  Elem mix = c5.field.add(c5.field.from_int(3), c5.field.pow(zeta, 3));
  CHECK(shapes::conjugate(c5, shapes::conjugate(c5, mix)) == mix);
  CHECK(shapes::conjugate(c5, c5.field.add(mix, zeta)) ==
        c5.field.add(shapes::conjugate(c5, mix), zbar));

  CHECK(kind_of([] { shapes::cyclotomic_context(2); }) == ErrorKind::usage);
  // phi(59) = 58 blows the degree cap.
  CHECK(kind_of([] { shapes::cyclotomic_context(59); }) == ErrorKind::budget);
}

TEST_CASE("polygon vertices and exact coordinates") {
  // Unit square on [0,1]: 0, 1, 1+i, i in the basis {1, i}.
  PlanarSet p4 = shapes::polygon_vertices(4);
  REQUIRE(p4.seed.size() == 4);
  CHECK(p4.seed[0] == E({0, 0}));
  CHECK(p4.seed[1] == E({1, 0}));
  CHECK(p4.seed[2] == E({1, 1}));
  CHECK(p4.seed[3] == E({0, 1}));
  CHECK(p4.elements == sorted(p4.seed));

  // Doubled real parts of the hexagon vertices: {-1, 0, 2, 3}.
  PlanarSet p6 = shapes::polygon_vertices(6);
  std::vector<Elem> re6;
  for (const Elem& v : p6.seed)
    re6.push_back(p6.ctx.field.add(v, shapes::conjugate(p6.ctx, v)));
  std::vector<Elem> want6 = {
      p6.ctx.field.from_int(-1), p6.ctx.field.zero(), p6.ctx.field.from_int(2),
      p6.ctx.field.from_int(3)};
  CHECK(sorted(re6) == sorted(want6));

  // Pentagon heights: 0, sin(2*pi/5), and the golden multiple; the doubled
  // imaginary parts satisfy d3 = phi * d2 exactly.
  PlanarSet p5 = shapes::polygon_vertices(5);
  const auto& f5 = p5.ctx.field;
  auto imag2 = [&](const Elem& v) {
    return f5.sub(v, shapes::conjugate(p5.ctx, v));
  };
  Elem phi = f5.neg(f5.add(f5.pow(f5.lambda(), 2), f5.pow(f5.lambda(), 3)));
  CHECK(f5.mul(phi, imag2(p5.seed[2])) == imag2(p5.seed[3]));
  CHECK(f5.approx_at(f5.to_q(p5.seed[2]), f5.lambda_index(), true) ==
        doctest::Approx(0.9510565163).epsilon(1e-9));
  CHECK(f5.approx_at(f5.to_q(p5.seed[3]), f5.lambda_index(), true) ==
        doctest::Approx(1.5388417686).epsilon(1e-9));

  // Doubled real parts of the 12-gon: {-1-s, -s, 0, 2, 2+s, 3+s}, s = sqrt3.
  PlanarSet p12 = shapes::polygon_vertices(12);
  const auto& f12 = p12.ctx.field;
  Elem s3 = f12.add(f12.lambda(), shapes::conjugate(p12.ctx, f12.lambda()));
  std::vector<Elem> re12;
  for (const Elem& v : p12.seed)
    re12.push_back(f12.add(v, shapes::conjugate(p12.ctx, v)));
  std::vector<Elem> want12 = {f12.neg(f12.add(f12.one(), s3)),
                              f12.neg(s3),
                              f12.zero(),
                              f12.from_int(2),
                              f12.add(f12.from_int(2), s3),
                              f12.add(f12.from_int(3), s3)};
  CHECK(sorted(re12) == sorted(want12));

  // Octagon bounding-rectangle corners 1 + i*(1+sqrt2) and i*(1+sqrt2) are
  // the vertices right after the half turn.
  PlanarSet p8 = shapes::polygon_vertices(8);
  const auto& f8 = p8.ctx.field;
  Elem i8 = f8.pow(f8.lambda(), 2);
  Elem h8 = f8.add(f8.one(),
                   f8.add(f8.lambda(), shapes::conjugate(p8.ctx, f8.lambda())));
  CHECK(p8.seed[4] == f8.add(f8.one(), f8.mul(i8, h8)));
  CHECK(p8.seed[5] == f8.mul(i8, h8));

  // 12-gon rectangle corners: height is exactly 2 + sqrt3.
  Elem i12 = f12.pow(f12.lambda(), 3);
  Elem h12 = f12.add(f12.from_int(2), s3);
  CHECK(p12.seed[6] == f12.add(f12.one(), f12.mul(i12, h12)));
  CHECK(p12.seed[7] == f12.mul(i12, h12));

  // A larger ambient ring holds the same polygon.
  PlanarSet p5w = shapes::polygon_vertices(5, 10);
  CHECK(p5w.ctx.order == 10);
  REQUIRE(p5w.seed.size() == 5);
  for (std::size_t l = 0; l < 5; ++l) {
    auto [ax, ay] = shapes::shadow(p5.ctx, p5.seed[l]);
    auto [bx, by] = shapes::shadow(p5w.ctx, p5w.seed[l]);
    CHECK(ax == doctest::Approx(bx).epsilon(1e-9));
    CHECK(ay == doctest::Approx(by).epsilon(1e-9));
  }

  CHECK(kind_of([] { shapes::polygon_vertices(2); }) == ErrorKind::usage);
  CHECK(kind_of([] { shapes::polygon_vertices(5, 12); }) == ErrorKind::usage);
}

TEST_CASE("polygon parameters as ring elements") {
  CyclotomicContext c5 = shapes::cyclotomic_context(5);
  Elem lam5 = shapes::lambda_element(c5, 5);
  CHECK(lam5 == E({1, 0, -1, -1}));  // 1 - zeta^2 - zeta^3 = 1 + phi
  auto [lx, ly] = shapes::shadow(c5, lam5);
  CHECK(lx == doctest::Approx(2.6180339887).epsilon(1e-9));
  CHECK(ly == doctest::Approx(0.0).epsilon(1e-9));

  CyclotomicContext c3 = shapes::cyclotomic_context(3);
  CHECK(shapes::lambda_element(c3, 3) == c3.field.one());

  CyclotomicContext c12 = shapes::cyclotomic_context(12);
  Elem lam6 = shapes::lambda_element(c12, 6);
  Elem sqrt3 = c12.field.add(c12.field.lambda(),
                             shapes::conjugate(c12, c12.field.lambda()));
  CHECK(lam6 == c12.field.add(c12.field.from_int(2), sqrt3));

  // The same value through a ring containing both indices.
  CyclotomicContext c10 = shapes::cyclotomic_context(10);
  auto [wx, wy] = shapes::shadow(c10, shapes::lambda_element(c10, 5));
  CHECK(wx == doctest::Approx(2.6180339887).epsilon(1e-9));
  CHECK(wy == doctest::Approx(0.0).epsilon(1e-9));

  // 2*(1 - cos(pi/4)) has a non-unit inverse: not an algebraic integer.
  CyclotomicContext c8 = shapes::cyclotomic_context(8);
  CHECK(kind_of([&] { shapes::lambda_element(c8, 4); }) == ErrorKind::usage);
  // Incompatible ring order.
  CHECK(kind_of([&] { shapes::lambda_element(c5, 4); }) == ErrorKind::usage);
  CHECK(kind_of([&] { shapes::lambda_element(c5, 2); }) == ErrorKind::usage);
}

TEST_CASE("parameter minimal polynomials and strong PV flags") {
  struct Row {
    int n;
    std::vector<int> minpoly;  // ascending
    int approx_milli;          // root, rounded to 1e-3
    bool spv;
  };
  const std::vector<Row> table = {
      {3, {-1, 1}, 1000, true},          {4, {1, -4, 2}, 1707, false},
      {5, {1, -3, 1}, 2618, true},       {6, {1, -4, 1}, 3732, true},
      {7, {-1, 5, -6, 1}, 5049, true},   {9, {-1, 6, -9, 1}, 8291, true},
      {15, {1, -9, 26, -24, 1}, 22881, true}};
  for (const Row& row : table) {
    shapes::PolygonLambda pl = shapes::polygon_lambda(row.n);
    CHECK(pl.n == row.n);
    std::vector<Int> want(row.minpoly.begin(), row.minpoly.end());
    CHECK(pl.minpoly == IntPolynomial(want));
    CHECK(pl.spv == row.spv);
    CHECK(pl.approx ==
          doctest::Approx(row.approx_milli / 1000.0).epsilon(1e-3));
    // The tabulated value brackets a sign change of the exact polynomial.
    Rat lo(row.approx_milli - 10, 1000), hi(row.approx_milli + 10, 1000);
    Rat plo = pl.minpoly.eval(lo), phi = pl.minpoly.eval(hi);
    CHECK(plo * phi < 0);
  }

  CHECK_FALSE(shapes::polygon_lambda(11).spv);
  CHECK_FALSE(shapes::polygon_lambda(13).spv);
  CHECK_FALSE(shapes::polygon_lambda(21).spv);

  CHECK(kind_of([] { shapes::polygon_lambda(2); }) == ErrorKind::usage);
  CHECK(kind_of([] { shapes::polygon_lambda(99); }) == ErrorKind::budget);
}

TEST_CASE("strong PV verdicts across odd polygon sizes") {
  std::vector<int> hits;
  for (int n = 3; n <= 99; n += 2)
    if (shapes::lambda_is_spv(n)) hits.push_back(n);
  CHECK(hits == std::vector<int>{3, 5, 7, 9, 15});

  // The integer test agrees with the root-location classification wherever
  // the ring degree permits both.
  for (int n : {3, 5, 7, 9, 11, 13, 15, 17, 21})
    CHECK(shapes::lambda_is_spv(n) == shapes::polygon_lambda(n).spv);

  CHECK(kind_of([] { shapes::lambda_is_spv(6); }) == ErrorKind::usage);
  CHECK(kind_of([] { shapes::lambda_is_spv(1); }) == ErrorKind::usage);
}

TEST_CASE("planar closures over cyclotomic rings") {
  PlanarSet p6 = shapes::polygon_vertices(6);
  const auto& f = p6.ctx.field;
  Elem two = f.from_int(2);

  // Rank 0 returns the seed; a parameter of 1 fixes any set instantly.
  PlanarSet r0 = shapes::planar_closure(p6, two, 0);
  CHECK(r0.elements == p6.elements);
  CHECK(r0.rank_reached == 0);
  CHECK_FALSE(r0.saturated);
  PlanarSet fixed = shapes::planar_closure(p6, f.one(), 5);
  CHECK(fixed.saturated);
  CHECK(fixed.elements == p6.elements);

  // The frontier expansion matches the reference all-pairs closure.
  PlanarSet r2 = shapes::planar_closure(p6, two, 2);
  starset::PointSet ref = starset::closure_rank_with(f, two, p6.seed, 2);
  CHECK(r2.elements == ref.elements);
  CHECK(r2.rank_reached == 2);

  // Doubling steps x + 2(y - x) preserve coordinate parity, so over the
  // basis {1, eta} with eta = e^(2i*pi/3) every reachable point a + b*eta
  // has a*b even (the seeds cover exactly the three even-ish parities).
  // Our basis vector is zeta = e^(i*pi/3) = 1 + eta, so a point with
  // coordinates (c0, c1) here has a = c0 + c1 and b = c1.
  starset::SearchBudget pruned;
  pruned.max_abs = Rat(12);
  PlanarSet r3 = shapes::planar_closure(p6, two, 3, pruned);
  CHECK(r3.elements.size() > r2.elements.size());
  for (const Elem& e : r3.elements) {
    REQUIRE(e.size() == 2);
    Int a = e[0] + e[1];
    const Int& b = e[1];
    CHECK_FALSE((a % 2 != 0 && b % 2 != 0));
  }
  CHECK(std::binary_search(r3.elements.begin(), r3.elements.end(), E({0, 2})));
  CHECK(std::binary_search(r3.elements.begin(), r3.elements.end(), E({2, 0})));
  // 1 + eta = zeta itself is odd-odd in that basis and can never appear.
  CHECK_FALSE(
      std::binary_search(r3.elements.begin(), r3.elements.end(), E({0, 1})));

  // Unpruned rank sets inherit the full dihedral symmetry of the seed.
  auto [omega, t] = vertex_rotation(p6);
  CHECK(t == f.one());
  auto rotate = [&](const Elem& z) { return f.add(f.mul(omega, z), t); };
  auto reflect = [&](const Elem& z) {
    return f.sub(f.one(), shapes::conjugate(p6.ctx, z));
  };
  CHECK(mapped(r2.elements, rotate) == r2.elements);
  CHECK(mapped(r2.elements, reflect) == r2.elements);

  starset::SearchBudget tiny;
  tiny.max_points = 10;
  CHECK(kind_of([&] { shapes::planar_closure(p6, two, 2, tiny); }) ==
        ErrorKind::budget);
  CHECK(kind_of([&] { shapes::planar_closure(p6, two, -1); }) ==
        ErrorKind::usage);
}

TEST_CASE("axis projection windows") {
  PlanarSet p5 = shapes::polygon_vertices(5);
  const auto& f = p5.ctx.field;
  Elem lam = shapes::lambda_element(p5.ctx, 5);
  starset::SearchBudget pruned;
  pruned.max_abs = Rat(8);
  PlanarSet q = shapes::planar_closure(p5, lam, 2, pruned);
  REQUIRE(q.elements.size() > 20);

  shapes::ProjectionReport re =
      shapes::axis_projection_check(q, lam, f.one());
  CHECK(re.pass);
  CHECK(re.checked == q.elements.size());
  CHECK(re.field_minpoly == IntPolynomial::parse("x^2-3x+1"));

  Elem updir = f.sub(f.lambda(), shapes::conjugate(p5.ctx, f.lambda()));
  shapes::ProjectionReport im = shapes::axis_projection_check(q, lam, updir);
  CHECK(im.pass);
  CHECK(im.outside_field.empty());
  CHECK(im.outside_window.empty());

  // 12-gon under its own parameter, projected on the real axis.
  PlanarSet p12 = shapes::polygon_vertices(12);
  Elem lam6 = shapes::lambda_element(p12.ctx, 6);
  PlanarSet q12 = shapes::planar_closure(p12, lam6, 2, pruned);
  CHECK(shapes::axis_projection_check(q12, lam6, p12.ctx.field.one()).pass);

  // A far-away intruder escapes the seed window.
  PlanarSet bad{p5.ctx, p5.seed, sorted([&] {
                  std::vector<Elem> v = p5.elements;
                  v.push_back(f.from_int(7));
                  return v;
                }()),
                0, true};
  shapes::ProjectionReport rep =
      shapes::axis_projection_check(bad, lam, f.one());
  CHECK_FALSE(rep.pass);
  CHECK(rep.outside_window == std::vector<Elem>{f.from_int(7)});
  CHECK(rep.outside_field.empty());

  // Projections of ring elements need not live over a rational parameter:
  // Re(zeta) is irrational, so it cannot be written over Q.
  PlanarSet off{p5.ctx,
                {f.zero(), f.one()},
                sorted({f.zero(), f.one(), f.lambda()}),
                0, true};
  shapes::ProjectionReport outf =
      shapes::axis_projection_check(off, f.from_int(2), f.one());
  CHECK_FALSE(outf.pass);
  CHECK(outf.outside_field == std::vector<Elem>{f.lambda()});

  CHECK(kind_of([&] { shapes::axis_projection_check(q, lam, f.zero()); }) ==
        ErrorKind::usage);
  CHECK(kind_of([&] {
          shapes::axis_projection_check(q, f.lambda(), f.one());
        }) == ErrorKind::usage);
}

TEST_CASE("exact distance statistics") {
  PlanarSet p5 = shapes::polygon_vertices(5);
  const auto& f = p5.ctx.field;

  PlanarSet pair01{p5.ctx, p5.seed, sorted({f.zero(), f.one()}), 0, true};
  shapes::DistanceStats d01 = shapes::distance_stats(pair01);
  CHECK(d01.min_is_one);
  CHECK(d01.min_square == f.one());
  CHECK(d01.min_distance.lo <= 1);
  CHECK(d01.min_distance.hi >= 1);
  REQUIRE(d01.attaining.size() == 1);
  CHECK(d01.attaining[0] == std::make_pair(f.zero(), f.one()));
  REQUIRE(d01.histogram.size() == 1);
  CHECK(d01.histogram[0] == std::make_pair(f.one(), std::size_t{1}));

  PlanarSet pair02{p5.ctx, p5.seed, sorted({f.zero(), f.from_int(2)}), 0, true};
  shapes::DistanceStats d02 = shapes::distance_stats(pair02);
  CHECK_FALSE(d02.min_is_one);
  CHECK(d02.min_square == f.from_int(4));
  CHECK(d02.min_distance.lo <= 2);
  CHECK(d02.min_distance.hi >= 2);

  // Pentagon vertices: five unit edges and five golden diagonals.
  shapes::DistanceStats dp5 = shapes::distance_stats(p5);
  CHECK(dp5.min_is_one);
  std::vector<std::pair<Elem, Elem>> edges;
  for (std::size_t l = 0; l < 5; ++l) {
    const Elem& a = p5.seed[l];
    const Elem& b = p5.seed[(l + 1) % 5];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  CHECK(dp5.attaining == edges);
  Elem lam = shapes::lambda_element(p5.ctx, 5);  // phi^2 = 1 + phi
  REQUIRE(dp5.histogram.size() == 2);
  CHECK(dp5.histogram[0] == std::make_pair(f.one(), std::size_t{5}));
  CHECK(dp5.histogram[1] == std::make_pair(lam, std::size_t{5}));
  CHECK_FALSE(dp5.histogram_truncated);

  // In the pentagon closure the unit distance is still attained only by
  // adjacent vertex pairs.
  starset::SearchBudget pruned;
  pruned.max_abs = Rat(8);
  PlanarSet q5 = shapes::planar_closure(p5, lam, 2, pruned);
  shapes::DistanceStats dq5 = shapes::distance_stats(q5);
  CHECK(dq5.min_is_one);
  CHECK(dq5.attaining == edges);

  shapes::DistanceStats trunc = shapes::distance_stats(q5, 4.0, 1);
  CHECK(trunc.histogram_truncated);
  CHECK(trunc.histogram.size() == 1);
  CHECK(trunc.histogram[0].first == f.one());

  // Octagon closure under 2 + sqrt2: minimum distance 1, and every
  // attaining difference is an eighth root of unity (the radial directions).
  PlanarSet p8 = shapes::polygon_vertices(8);
  const auto& f8 = p8.ctx.field;
  Elem lam8 = f8.add(f8.from_int(2),
                     f8.add(f8.lambda(), shapes::conjugate(p8.ctx, f8.lambda())));
  PlanarSet q8 = shapes::planar_closure(p8, lam8, 2, pruned);
  shapes::DistanceStats dq8 = shapes::distance_stats(q8);
  CHECK(dq8.min_is_one);
  CHECK(dq8.attaining.size() >= 8);
  for (const auto& [a, b] : dq8.attaining)
    CHECK(f8.pow(f8.sub(b, a), 8) == f8.one());

  // 12-gon closure under 2 + sqrt3 keeps its points one apart.
  PlanarSet p12 = shapes::polygon_vertices(12);
  Elem lam12 = shapes::lambda_element(p12.ctx, 6);
  PlanarSet q12 = shapes::planar_closure(p12, lam12, 2, pruned);
  shapes::DistanceStats dq12 = shapes::distance_stats(q12);
  CHECK(dq12.min_is_one);

  PlanarSet lonely{p5.ctx, p5.seed, {f.zero()}, 0, true};
  CHECK(kind_of([&] { shapes::distance_stats(lonely); }) == ErrorKind::usage);
}

TEST_CASE("derivations inside a planar closure") {
  PlanarSet p5 = shapes::polygon_vertices(5);
  const auto& f = p5.ctx.field;
  Elem lam = shapes::lambda_element(p5.ctx, 5);
  Elem zeta = f.lambda();

  // sigma = -zeta^4 is the last vertex; sigma + phi is the second-from-base.
  Elem sigma = f.neg(f.pow(zeta, 4));
  CHECK(sigma == p5.seed[4]);
  Elem phi = f.neg(f.add(f.pow(zeta, 2), f.pow(zeta, 3)));
  CHECK(f.add(sigma, phi) == p5.seed[2]);
  CHECK(f.add(f.one(), phi) == lam);

  auto found = starset::derivation_search_with(f, lam, f.add(sigma, phi),
                                               p5.seed);
  REQUIRE(found.has_value());
  CHECK(starset::replay_derivation(f, *found) == f.add(sigma, phi));

  starset::SearchStats stats;
  auto found2 = starset::derivation_search_with(f, lam, f.add(f.one(), phi),
                                                p5.seed, {}, &stats);
  REQUIRE(found2.has_value());
  CHECK(starset::replay_derivation(f, *found2) == lam);
  CHECK(stats.depth <= 2);
}
