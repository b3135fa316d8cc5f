#include "fpx/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fpx/error.hpp"

namespace fpx::shapes {

using algebra::ComplexBox;
using algebra::Elem;
using algebra::IntPolynomial;
using algebra::NumberFieldContext;
using algebra::QElem;
using algebra::RationalInterval;

namespace {

const Rat kShadowEps(Int(1), Int(1) << 48);

double to_double(const Rat& r) { return r.convert_to<double>(); }

// --- rational polynomial helpers (Euclid over Q, primitive images) ---------

std::vector<Rat> to_qvec(const IntPolynomial& p) {
  std::vector<Rat> v(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i) v[i] = Rat(p.c[i]);
  return v;
}

int qdeg(const std::vector<Rat>& v) {
  std::size_t len = v.size();
  while (len > 0 && v[len - 1] == 0) --len;
  return static_cast<int>(len) - 1;
}

// Primitive integer image: denominators cleared, content divided out,
// leading coefficient positive.
IntPolynomial primitive(const std::vector<Rat>& v) {
  int deg = qdeg(v);
  if (deg < 0) return IntPolynomial::zero();
  std::size_t len = static_cast<std::size_t>(deg) + 1;
  Int den_lcm = 1;
  for (std::size_t i = 0; i < len; ++i) {
    Int d = denominator(v[i]);
    den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, d) * d;
  }
  std::vector<Int> c(len);
  Int content = 0;
  for (std::size_t i = 0; i < len; ++i) {
    c[i] = numerator(v[i]) * (den_lcm / denominator(v[i]));
    content = boost::multiprecision::gcd(content, c[i] < 0 ? Int(-c[i]) : c[i]);
  }
  if (c[len - 1] < 0) content = -content;
  for (auto& x : c) x /= content;
  return IntPolynomial(std::move(c));
}

// Remainder of a by b over the rationals; b nonzero.
std::vector<Rat> qrem(std::vector<Rat> a, const std::vector<Rat>& b) {
  int db = qdeg(b);
  if (db <= 0) {  // nonzero constant divides everything
    a.clear();
    return a;
  }
  for (int da = qdeg(a); da >= db; da = qdeg(a)) {
    Rat q = a[static_cast<std::size_t>(da)] / b[static_cast<std::size_t>(db)];
    for (int i = 0; i < db; ++i)
      a[static_cast<std::size_t>(da - db + i)] -= q * b[static_cast<std::size_t>(i)];
    a.resize(static_cast<std::size_t>(da));
  }
  return a;
}

IntPolynomial poly_gcd(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Rat> u = to_qvec(a), v = to_qvec(b);
  while (qdeg(v) >= 0) {
    std::vector<Rat> r = qrem(u, v);
    u.swap(v);
    v.swap(r);
  }
  return primitive(u);
}

// Exact quotient over Q, primitivized; the division must be exact.
IntPolynomial exact_quotient(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Rat> u = to_qvec(a), v = to_qvec(b);
  int db = qdeg(v);
  if (db < 0) throw internal_error("division by the zero polynomial");
  std::vector<Rat> q(static_cast<std::size_t>(std::max(qdeg(u) - db + 1, 0)),
                     Rat(0));
  for (int da = qdeg(u); da >= db; da = qdeg(u)) {
    Rat f = u[static_cast<std::size_t>(da)] / v[static_cast<std::size_t>(db)];
    q[static_cast<std::size_t>(da - db)] = f;
    for (int i = 0; i <= db; ++i)
      u[static_cast<std::size_t>(da - db + i)] -= f * v[static_cast<std::size_t>(i)];
  }
  if (qdeg(u) >= 0) throw internal_error("inexact polynomial division");
  return primitive(q);
}

// g / gcd(g, g'): the distinct-root part, primitive.
IntPolynomial squarefree_part(const IntPolynomial& g) {
  IntPolynomial d = poly_gcd(g, g.derivative());
  if (d.degree() <= 0) return primitive(to_qvec(g));
  return exact_quotient(g, d);
}

// --- cyclotomic plumbing ----------------------------------------------------

// zeta^k reduced into the power basis, k = 0 .. order-1.
std::vector<Elem> zeta_powers(const CyclotomicContext& ctx) {
  std::vector<Elem> pw(static_cast<std::size_t>(ctx.order));
  pw[0] = ctx.field.one();
  for (int k = 1; k < ctx.order; ++k)
    pw[static_cast<std::size_t>(k)] =
        ctx.field.mul_lambda(pw[static_cast<std::size_t>(k - 1)]);
  return pw;
}

Elem conj_with(const CyclotomicContext& ctx, const std::vector<Elem>& pw,
               const Elem& e) {
  Elem out = ctx.field.zero();
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    std::size_t k = static_cast<std::size_t>(
        (ctx.order - static_cast<int>(j) % ctx.order) % ctx.order);
    out = ctx.field.add(out, ctx.field.mul_int(pw[k], e[j]));
  }
  return out;
}

std::complex<double> box_mid(const ComplexBox& b) {
  return {to_double((b.re.lo + b.re.hi) / 2), to_double((b.im.lo + b.im.hi) / 2)};
}

// Exact comparison of two real-valued elements by their designated-root
// values: refines enclosures until separated (equal elements short-circuit).
int cmp_values(const NumberFieldContext& f, const Elem& a, const Elem& b) {
  if (a == b) return 0;
  Elem d = f.sub(a, b);
  int li = f.lambda_index();
  for (unsigned bits = 32; bits <= 512; bits *= 2) {
    ComplexBox box = f.value_box(d, li, Rat(Int(1), Int(1) << bits));
    if (box.re.lo > 0) return 1;
    if (box.re.hi < 0) return -1;
  }
  throw internal_error("could not separate two element values");
}

// --- exact linear solves against the parameter's power basis ---------------

// Writes field elements in the basis 1, t, ..., t^(r-1) of Q(t).  Solutions
// are certified by re-multiplying; an unsolvable system means the value
// lies outside Q(t).
struct FieldSolver {
  std::vector<QElem> cols;                 // t^j, each of length d
  std::vector<int> pivot_rows;             // r independent rows
  std::vector<std::vector<Rat>> inverse;   // of the pivot submatrix, r x r
  int d = 0, r = 0;

  FieldSolver(const NumberFieldContext& f, const Elem& t, int degree) {
    d = f.degree();
    r = degree;
    Elem p = f.one();
    for (int j = 0; j < r; ++j) {
      cols.push_back(f.to_q(p));
      if (j + 1 < r) p = f.mul(p, t);
    }
    // Row-echelon pass on a copy to pick r independent rows.
    std::vector<std::vector<Rat>> w(static_cast<std::size_t>(d),
                                    std::vector<Rat>(static_cast<std::size_t>(r)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < r; ++j)
        w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    std::vector<int> rows(static_cast<std::size_t>(d));
    std::iota(rows.begin(), rows.end(), 0);
    int lead = 0;
    for (int col = 0; col < r; ++col) {
      int found = -1;
      for (int i = lead; i < d; ++i)
        if (w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
          found = i;
          break;
        }
      if (found < 0) throw internal_error("parameter powers are dependent");
      std::swap(w[static_cast<std::size_t>(lead)], w[static_cast<std::size_t>(found)]);
      std::swap(rows[static_cast<std::size_t>(lead)], rows[static_cast<std::size_t>(found)]);
      pivot_rows.push_back(rows[static_cast<std::size_t>(lead)]);
      for (int i = lead + 1; i < d; ++i) {
        const Rat f2 = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] /
                       w[static_cast<std::size_t>(lead)][static_cast<std::size_t>(col)];
        if (f2 == 0) continue;
        for (int j = col; j < r; ++j)
          w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
              f2 * w[static_cast<std::size_t>(lead)][static_cast<std::size_t>(j)];
      }
      ++lead;
    }
    // Invert the pivot submatrix by Gauss-Jordan.
    std::vector<std::vector<Rat>> m(static_cast<std::size_t>(r),
                                    std::vector<Rat>(static_cast<std::size_t>(2 * r)));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            cols[static_cast<std::size_t>(j)]
                [static_cast<std::size_t>(pivot_rows[static_cast<std::size_t>(i)])];
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(r + i)] = 1;
    }
    for (int col = 0; col < r; ++col) {
      int found = -1;
      for (int i = col; i < r; ++i)
        if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
          found = i;
          break;
        }
      if (found < 0) throw internal_error("pivot submatrix is singular");
      std::swap(m[static_cast<std::size_t>(col)], m[static_cast<std::size_t>(found)]);
      const Rat lead2 = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      for (int j = 0; j < 2 * r; ++j)
        m[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] /= lead2;
      for (int i = 0; i < r; ++i) {
        if (i == col) continue;
        const Rat f2 = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
        if (f2 == 0) continue;
        for (int j = 0; j < 2 * r; ++j)
          m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
              f2 * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
      }
    }
    inverse.assign(static_cast<std::size_t>(r),
                   std::vector<Rat>(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        inverse[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(r + j)];
  }

  bool solve(const QElem& v, QElem& out) const {
    out.assign(static_cast<std::size_t>(r), Rat(0));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        out[static_cast<std::size_t>(i)] +=
            inverse[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
            v[static_cast<std::size_t>(pivot_rows[static_cast<std::size_t>(j)])];
    for (int i = 0; i < d; ++i) {
      Rat acc(0);
      for (int j = 0; j < r; ++j)
        acc += out[static_cast<std::size_t>(j)] *
               cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (acc != v[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  }
};

}  // namespace

// --- contexts and conjugation -----------------------------------------------

CyclotomicContext cyclotomic_context(int order) {
  if (order < 3) throw usage_error("cyclotomic order must be at least 3");
  int deg = algebra::euler_phi(order);
  if (deg > 16)
    throw budget_error("cyclotomic degree " + std::to_string(deg) +
                       " exceeds the supported cap of 16");
  double ang = 2.0 * std::numbers::pi / order;
  return {order, NumberFieldContext::make(
                     algebra::cyclotomic_polynomial(order),
                     std::make_pair(std::cos(ang), std::sin(ang)))};
}

Elem conjugate(const CyclotomicContext& ctx, const Elem& e) {
  return conj_with(ctx, zeta_powers(ctx), e);
}

std::pair<double, double> shadow(const CyclotomicContext& ctx, const Elem& e) {
  ComplexBox b = ctx.field.value_box(e, ctx.field.lambda_index(), kShadowEps);
  std::complex<double> z = box_mid(b);
  return {z.real(), z.imag()};
}

// --- polygons and their parameters -------------------------------------------

PlanarSet polygon_vertices(int n, int order) {
  if (n < 3) throw usage_error("a polygon needs at least 3 vertices");
  if (order == 0) order = n;
  if (order % n != 0)
    throw usage_error("ambient order must be a multiple of the vertex count");
  CyclotomicContext ctx = cyclotomic_context(order);
  std::vector<Elem> pw = zeta_powers(ctx);
  int step = order / n;
  std::vector<Elem> verts;
  verts.reserve(static_cast<std::size_t>(n));
  Elem v = ctx.field.zero();
  for (int l = 0; l < n; ++l) {
    verts.push_back(v);
    if (l + 1 < n)
      v = ctx.field.add(v, pw[static_cast<std::size_t>((l * step) % order)]);
  }
  std::vector<Elem> sorted = verts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return {std::move(ctx), std::move(verts), std::move(sorted), 0, true};
}

Elem lambda_element(const CyclotomicContext& ctx, int n) {
  if (n < 3) throw usage_error("polygon parameters need n >= 3");
  const NumberFieldContext& f = ctx.field;
  std::vector<Elem> pw = zeta_powers(ctx);
  Elem denom;
  if (ctx.order % (2 * n) == 0) {
    int s = ctx.order / (2 * n);
    denom = f.sub(f.from_int(2),
                  f.add(pw[static_cast<std::size_t>(s)],
                        pw[static_cast<std::size_t>(ctx.order - s)]));
  } else if (n % 2 == 1 && ctx.order % n == 0) {
    int s = (ctx.order / n) * ((n - 1) / 2) % ctx.order;
    denom = f.add(f.from_int(2),
                  f.add(pw[static_cast<std::size_t>(s)],
                        pw[static_cast<std::size_t>(ctx.order - s)]));
  } else {
    throw usage_error("ring order is incompatible with this polygon parameter");
  }
  QElem inv = f.qinverse(f.to_q(denom));
  if (!NumberFieldContext::is_int_elem(inv))
    throw usage_error("polygon parameter is not an algebraic integer");
  return f.to_elem(inv);
}

PolygonLambda polygon_lambda(int n) {
  if (n < 3) throw usage_error("polygon parameters need n >= 3");
  PolygonLambda out;
  out.n = n;
  out.approx = 1.0 / (2.0 * (1.0 - std::cos(std::numbers::pi / n)));
  if (n % 2 == 1) {
    CyclotomicContext ctx = cyclotomic_context(n == 3 ? 3 : n);
    Elem lam = lambda_element(ctx, n);
    out.minpoly = squarefree_part(ctx.field.element_charpoly(lam));
  } else {
    CyclotomicContext ctx = cyclotomic_context(2 * n);
    std::vector<Elem> pw = zeta_powers(ctx);
    int s = ctx.order / (2 * n);
    Elem denom = ctx.field.sub(
        ctx.field.from_int(2),
        ctx.field.add(pw[static_cast<std::size_t>(s)],
                      pw[static_cast<std::size_t>(ctx.order - s)]));
    IntPolynomial md = squarefree_part(ctx.field.element_charpoly(denom));
    IntPolynomial mp = algebra::reversed(md);
    if (mp.leading() < 0) mp = IntPolynomial::constant(Int(-1)) * mp;
    out.minpoly = mp;
  }
  if (out.minpoly.leading() == 1) {
    NumberFieldContext check = NumberFieldContext::make(out.minpoly);
    out.spv = check.lambda_is_real() &&
              static_cast<int>(check.real_unit_interval_indices().size()) ==
                  check.degree() - 1;
  }
  return out;
}

bool lambda_is_spv(int n) {
  if (n < 3 || n % 2 == 0)
    throw usage_error("the integer strong PV test covers odd n >= 3");
  for (int j = (n + 2) / 3; 3 * j <= 2 * n; ++j) {
    if (std::gcd(j, n) != 1) continue;
    if (2 * j == n - 1 || 2 * j == n + 1) continue;
    return false;
  }
  return true;
}

// --- closure -----------------------------------------------------------------

PlanarSet planar_closure(const PlanarSet& seed, const Elem& param, int rank,
                         const starset::SearchBudget& budget) {
  if (rank < 0) throw usage_error("closure level must be nonnegative");
  if (seed.seed.empty()) throw usage_error("closure needs a nonempty seed set");
  const NumberFieldContext& f = seed.ctx.field;
  const int li = f.lambda_index();
  const std::complex<double> lam =
      box_mid(f.value_box(param, li, kShadowEps));
  const double bound = to_double(budget.max_abs);

  std::set<Elem> seen(seed.seed.begin(), seed.seed.end());
  std::vector<Elem> pts(seen.begin(), seen.end());
  std::vector<std::complex<double>> sh;
  sh.reserve(pts.size());
  for (const Elem& e : pts) sh.push_back(box_mid(f.value_box(e, li, kShadowEps)));

  std::size_t frontier_begin = 0;
  int reached = 0;
  bool saturated = false;
  for (int level = 0; level < rank; ++level) {
    const std::size_t frontier_end = pts.size();
    std::set<Elem> fresh;
    for (std::size_t i = frontier_begin; i < frontier_end; ++i)
      for (std::size_t j = 0; j < frontier_end; ++j) {
        if (i == j) continue;
        const std::complex<double> guesses[2] = {
            sh[j] + lam * (sh[i] - sh[j]), sh[i] + lam * (sh[j] - sh[i])};
        const Elem* ab[2][2] = {{&pts[j], &pts[i]}, {&pts[i], &pts[j]}};
        for (int k = 0; k < 2; ++k) {
          // Shadows certify the prune outside a slack band around the
          // radius; inside the band the comparison is exact.
          if (std::abs(guesses[k]) > bound + 0.5) continue;
          Elem cand = starset::star(f, param, *ab[k][0], *ab[k][1]);
          if (seen.count(cand) || fresh.count(cand)) continue;
          if (std::abs(guesses[k]) > bound - 0.5 &&
              f.cmp_abs_lambda(cand, budget.max_abs) > 0)
            continue;
          fresh.insert(std::move(cand));
        }
      }
    if (seen.size() + fresh.size() > budget.max_points)
      throw budget_error("planar closure passed " +
                         std::to_string(budget.max_points) +
                         " points; finished level " + std::to_string(level));
    reached = level + 1;
    if (fresh.empty()) {
      saturated = true;
      break;
    }
    for (const Elem& e : fresh) {
      sh.push_back(box_mid(f.value_box(e, li, kShadowEps)));
      pts.push_back(e);
    }
    seen.insert(fresh.begin(), fresh.end());
    frontier_begin = frontier_end;
  }

  return {seed.ctx, seed.seed, std::vector<Elem>(seen.begin(), seen.end()),
          reached, saturated};
}

// --- axis projections ----------------------------------------------------------

ProjectionReport axis_projection_check(const PlanarSet& set, const Elem& param,
                                       const Elem& direction) {
  const NumberFieldContext& f = set.ctx.field;
  if (set.seed.empty())
    throw usage_error("projection checks need the generating seed");
  if (direction == f.zero())
    throw usage_error("projection direction must be nonzero");
  std::vector<Elem> pw = zeta_powers(set.ctx);
  if (conj_with(set.ctx, pw, param) != param)
    throw usage_error("projection windows need a real parameter");

  const Elem ubar = conj_with(set.ctx, pw, direction);
  auto project = [&](const Elem& z) {
    return f.add(f.mul(z, ubar), f.mul(conj_with(set.ctx, pw, z), direction));
  };

  IntPolynomial mp = squarefree_part(f.element_charpoly(param));
  FieldSolver solver(f, param, mp.degree());

  std::vector<QElem> seed_coords;
  for (const Elem& s : set.seed) {
    QElem c;
    if (!solver.solve(f.to_q(project(s)), c))
      throw usage_error("projected seed lies outside the parameter's field");
    seed_coords.push_back(std::move(c));
  }
  std::vector<Elem> outside_field;
  std::vector<std::pair<Elem, QElem>> point_coords;
  for (const Elem& z : set.elements) {
    QElem c;
    if (solver.solve(f.to_q(project(z)), c))
      point_coords.emplace_back(z, std::move(c));
    else
      outside_field.push_back(z);
  }

  Int scale = 1;
  auto fold_scale = [&scale](const QElem& c) {
    for (const Rat& x : c) {
      Int d = denominator(x);
      scale = scale / boost::multiprecision::gcd(scale, d) * d;
    }
  };
  for (const QElem& c : seed_coords) fold_scale(c);
  for (const auto& [z, c] : point_coords) fold_scale(c);

  double approx = f.approx_at(f.to_q(param), f.lambda_index());
  NumberFieldContext line =
      NumberFieldContext::make(mp, std::make_pair(approx, 0.0));
  auto scaled = [&](const QElem& c) {
    QElem s(c);
    for (Rat& x : s) x *= Rat(scale);
    return line.to_elem(s);
  };
  std::vector<Elem> seed_1d;
  for (const QElem& c : seed_coords) seed_1d.push_back(scaled(c));
  modelset::ModelSetSpec spec = modelset::spec_from_seed(line, seed_1d);

  std::vector<Elem> outside_window;
  for (const auto& [z, c] : point_coords)
    if (!modelset::member(spec, scaled(c))) outside_window.push_back(z);

  return {outside_field.empty() && outside_window.empty(),
          set.elements.size(),
          std::move(outside_field),
          std::move(outside_window),
          std::move(mp),
          std::move(spec),
          std::move(scale)};
}

// --- distance statistics ----------------------------------------------------------

DistanceStats distance_stats(const PlanarSet& set, double histogram_radius,
                             std::size_t histogram_entries) {
  const std::vector<Elem>& pts = set.elements;
  if (pts.size() < 2)
    throw usage_error("distance statistics need at least two points");
  const NumberFieldContext& f = set.ctx.field;
  const int li = f.lambda_index();
  std::vector<Elem> pw = zeta_powers(set.ctx);

  const std::size_t n = pts.size();
  std::vector<double> xs(n), ys(n);
  double extent = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> z = box_mid(f.value_box(pts[i], li, kShadowEps));
    xs[i] = z.real();
    ys[i] = z.imag();
    extent = std::max(extent, std::abs(z));
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      best = std::min(best, dx * dx + dy * dy);
    }
  // Enclosure widths are ~1e-14, so this margin strictly contains every
  // pair whose exact squared distance could reach the float minimum.
  const double margin = 1e-6 * std::max(1.0, best) + extent * extent * 1e-12;
  const double hist_cut =
      histogram_radius * histogram_radius + margin;

  auto square_of = [&](std::size_t i, std::size_t j) {
    Elem d = f.sub(pts[i], pts[j]);
    return f.mul(d, conj_with(set.ctx, pw, d));
  };

  std::map<Elem, std::vector<std::pair<std::size_t, std::size_t>>> near_min;
  std::map<Elem, std::size_t> hist;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      double d2 = dx * dx + dy * dy;
      if (d2 > hist_cut && d2 > best + margin) continue;
      Elem sq = square_of(i, j);
      if (d2 <= best + margin) near_min[sq].emplace_back(i, j);
      if (d2 <= hist_cut) ++hist[sq];
    }

  const Elem* min_key = nullptr;
  for (const auto& [key, pairs] : near_min)
    if (min_key == nullptr || cmp_values(f, key, *min_key) < 0) min_key = &key;

  DistanceStats out;
  out.min_square = *min_key;
  out.min_is_one = (*min_key == f.one());
  for (const auto& [i, j] : near_min.at(*min_key)) {
    const Elem& a = pts[i];
    const Elem& b = pts[j];
    out.attaining.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(out.attaining.begin(), out.attaining.end());

  unsigned bits = 60;
  ComplexBox box = f.value_box(out.min_square, li, Rat(Int(1), Int(1) << bits));
  while (box.re.lo <= 0 && bits < 512) {
    bits *= 2;
    box = f.value_box(out.min_square, li, Rat(Int(1), Int(1) << bits));
  }
  if (box.re.lo <= 0)
    throw internal_error("could not bound the minimum distance away from zero");
  out.min_distance = algebra::sqrt_outer(box.re, 48);

  std::vector<std::pair<Elem, std::size_t>> entries(hist.begin(), hist.end());
  std::sort(entries.begin(), entries.end(),
            [&](const auto& a, const auto& b) {
              return cmp_values(f, a.first, b.first) < 0;
            });
  if (entries.size() > histogram_entries) {
    entries.resize(histogram_entries);
    out.histogram_truncated = true;
  }
  out.histogram = std::move(entries);
  return out;
}

}  // namespace fpx::shapes
