#include "fpx/modelset.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <utility>

#include "fpx/error.hpp"
#include "fpx/spv.hpp"

namespace fpx::modelset {

using algebra::ComplexBox;
using algebra::Elem;
using algebra::IntPolynomial;
using algebra::NumberFieldContext;
using algebra::QElem;
using algebra::RationalInterval;

namespace {

void check_size(const NumberFieldContext& ctx, const Elem& e) {
  if (static_cast<int>(e.size()) != ctx.degree())
    throw usage_error("element does not belong to this context");
}

void require_spv(const NumberFieldContext& ctx, const char* what) {
  QElem lam = ctx.to_q(ctx.lambda());
  double re = ctx.approx_at(lam, ctx.lambda_index(), false);
  double im = ctx.approx_at(lam, ctx.lambda_index(), true);
  spv::Classification cls =
      spv::classify(ctx.minpoly(), std::make_pair(re, im));
  if (cls.verdict == spv::Verdict::not_spv)
    throw usage_error(std::string(what) + " requires a strong PV parameter");
}

Rat hull_reach(const ModelSetSpec& spec) {
  Rat w(0);
  for (const auto& iv : spec.hull.bounds) {
    Rat a = iv.first < 0 ? -iv.first : iv.first;
    Rat b = iv.second < 0 ? -iv.second : iv.second;
    if (a > w) w = a;
    if (b > w) w = b;
  }
  return w;
}

// Determinant of a small box matrix by first-column expansion.
ComplexBox box_det(const std::vector<std::vector<ComplexBox>>& m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  ComplexBox acc = ComplexBox::point(Rat(0), Rat(0));
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::vector<ComplexBox>> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      std::vector<ComplexBox> row(m[i].begin() + 1, m[i].end());
      minor.push_back(std::move(row));
    }
    ComplexBox term = m[r][0] * box_det(minor);
    if (r % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  }
  return acc;
}

ComplexBox box_cofactor(const std::vector<std::vector<ComplexBox>>& m,
                        std::size_t row, std::size_t col) {
  std::size_t n = m.size();
  std::vector<std::vector<ComplexBox>> minor;
  minor.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == row) continue;
    std::vector<ComplexBox> r;
    r.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != col) r.push_back(m[i][j]);
    minor.push_back(std::move(r));
  }
  ComplexBox d = box_det(minor);
  if ((row + col) % 2 == 1) d = ComplexBox::point(Rat(0), Rat(0)) - d;
  return d;
}

}  // namespace

ModelSetSpec unit_spec(const NumberFieldContext& ctx) {
  require_spv(ctx, "a model-set window");
  ModelSetSpec spec{ctx, {}, {}, {}};
  for (std::size_t s = 0; s < ctx.real_unit_interval_indices().size(); ++s) {
    spec.lo.push_back(ctx.zero());
    spec.hi.push_back(ctx.one());
    spec.hull.bounds.emplace_back(Rat(0), Rat(1));
  }
  return spec;
}

ModelSetSpec spec_from_seed(const NumberFieldContext& ctx,
                            const std::vector<Elem>& seed) {
  require_spv(ctx, "a model-set window");
  if (seed.empty()) throw usage_error("window needs a nonempty seed set");
  for (const Elem& e : seed) check_size(ctx, e);

  ModelSetSpec spec{ctx, {}, {}, {}};
  const Rat eps = Rat(1, Int(1) << 48);
  for (int j : ctx.real_unit_interval_indices()) {
    Elem lo = seed.front(), hi = seed.front();
    for (const Elem& e : seed) {
      if (ctx.sign_at(ctx.sub(e, lo), j) < 0) lo = e;
      if (ctx.sign_at(ctx.sub(e, hi), j) > 0) hi = e;
    }
    spec.lo.push_back(lo);
    spec.hi.push_back(hi);
    spec.hull.bounds.emplace_back(ctx.value_box(lo, j, eps).re.lo,
                                  ctx.value_box(hi, j, eps).re.hi);
  }
  return spec;
}

bool member(const ModelSetSpec& spec, const Elem& x) {
  const NumberFieldContext& ctx = spec.ctx;
  check_size(ctx, x);
  std::vector<int> idx = ctx.real_unit_interval_indices();
  if (spec.lo.size() != idx.size() || spec.hi.size() != idx.size())
    throw usage_error("window does not match this context");
  for (std::size_t s = 0; s < idx.size(); ++s) {
    if (ctx.sign_at(ctx.sub(x, spec.lo[s]), idx[s]) < 0) return false;
    if (ctx.sign_at(ctx.sub(spec.hi[s], x), idx[s]) < 0) return false;
  }
  return true;
}

namespace {

// Real quadratic scan: the second coordinate is bounded because value and
// conjugate image differ by b*(lambda - mu), whose square is the
// discriminant; the first coordinate is pinned by the window.
starset::PointSet enumerate_quadratic(const ModelSetSpec& spec,
                                      const Rat& radius) {
  const NumberFieldContext& ctx = spec.ctx;
  int j = ctx.real_unit_interval_indices().at(0);
  const Rat disc = Rat(ctx.minpoly().c[1] * ctx.minpoly().c[1] -
                       4 * ctx.minpoly().c[0]);
  const Rat reach = (radius + hull_reach(spec)) * (radius + hull_reach(spec));

  std::vector<Elem> out;
  for (Int b(0);; ++b) {
    if (Rat(b * b) * disc > reach && b != 0) break;
    for (int sgn = 0; sgn < (b == 0 ? 1 : 2); ++sgn) {
      Int bb = sgn == 0 ? b : Int(-b);
      Elem shift = ctx.mul_int(ctx.lambda(), bb);
      Int a = ctx.ceil_value(ctx.sub(spec.lo[0], shift), j);
      Int ahi = ctx.floor_value(ctx.sub(spec.hi[0], shift), j);
      for (; a <= ahi; ++a) {
        Elem e{a, bb};
        if (ctx.cmp_abs_lambda(e, radius) > 0) continue;
        if (!member(spec, e)) continue;
        out.push_back(std::move(e));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return {std::move(out), 0, true};
}

struct CoordRanges {
  std::vector<std::pair<Int, Int>> r;  // inclusive per coordinate
};

// Sound per-coordinate integer ranges from an interval inverse of the
// conjugate value system: coordinates = V^{-1} * values, with value boxes
// [-radius, radius] on the designated embedding and the window hull on each
// windowed conjugate.
CoordRanges coordinate_ranges(const ModelSetSpec& spec, const Rat& radius) {
  const NumberFieldContext& ctx = spec.ctx;
  const int d = ctx.degree();
  std::vector<int> widx = ctx.real_unit_interval_indices();

  Rat eps = Rat(1, Int(1) << 64);
  for (int attempt = 0;; ++attempt) {
    std::vector<std::vector<ComplexBox>> V(d);
    std::vector<ComplexBox> vals(d);
    for (int i = 0; i < d; ++i) {
      ComplexBox root = ctx.root_enclosure(i, eps).box();
      ComplexBox p = ComplexBox::point(Rat(1), Rat(0));
      for (int k = 0; k < d; ++k) {
        V[i].push_back(p);
        p = (p * root).round_out(192);
      }
      if (i == ctx.lambda_index() || i == ctx.conjugate_index(ctx.lambda_index())) {
        RationalInterval ball(-radius, radius);
        vals[i] = ctx.root_is_real(i)
                      ? ComplexBox(ball, RationalInterval::point(Rat(0)))
                      : ComplexBox(ball, ball);
      } else {
        auto slot = std::find(widx.begin(), widx.end(), i);
        if (slot == widx.end())
          throw internal_error("enumeration met a conjugate outside the window");
        const auto& h = spec.hull.bounds.at(slot - widx.begin());
        vals[i] = ComplexBox(RationalInterval(h.first, h.second),
                             RationalInterval::point(Rat(0)));
      }
    }

    ComplexBox det = box_det(V);
    if (det.abs_square().contains_zero()) {
      if (attempt >= 3) throw internal_error("conjugate system is numerically singular");
      eps = eps / (Int(1) << 32);
      continue;
    }

    CoordRanges cr;
    for (int i = 0; i < d; ++i) {
      ComplexBox num = ComplexBox::point(Rat(0), Rat(0));
      for (int j = 0; j < d; ++j) num = num + box_cofactor(V, j, i) * vals[j];
      RationalInterval ai = (num / det).re;
      cr.r.emplace_back(rat_ceil(ai.lo), rat_floor(ai.hi));
    }
    return cr;
  }
}

}  // namespace

starset::PointSet enumerate_radius_lattice(const ModelSetSpec& spec,
                                           const Rat& radius, int threads) {
  const NumberFieldContext& ctx = spec.ctx;
  if (radius <= 0) throw usage_error("enumeration radius must be positive");
  const int d = ctx.degree();

  if (d == 1) {
    std::vector<Elem> out;
    for (Int v = rat_ceil(-radius); v <= rat_floor(radius); ++v)
      out.push_back(Elem{v});
    return {std::move(out), 0, true};
  }

  CoordRanges cr = coordinate_ranges(spec, radius);
  std::vector<int> widx = ctx.real_unit_interval_indices();

  // Walk one assignment of the trailing coordinates a_1..a_{d-1}; the
  // leading coordinate is pinned by the window (or by the interval range
  // when there is no windowed conjugate).
  auto scan_tail = [&](const std::vector<Int>& tail_coords,
                       std::vector<Elem>& sink) {
    Elem tail(d, Int(0));
    for (int i = 1; i < d; ++i) tail[i] = tail_coords[i - 1];
    Int a0 = cr.r[0].first, a0hi = cr.r[0].second;
    if (!widx.empty()) {
      Int wlo = ctx.ceil_value(ctx.sub(spec.lo[0], tail), widx[0]);
      Int whi = ctx.floor_value(ctx.sub(spec.hi[0], tail), widx[0]);
      if (wlo > a0) a0 = wlo;
      if (whi < a0hi) a0hi = whi;
    }
    for (; a0 <= a0hi; ++a0) {
      Elem e = tail;
      e[0] = a0;
      if (ctx.cmp_abs_lambda(e, radius) > 0) continue;
      if (!member(spec, e)) continue;
      sink.push_back(std::move(e));
    }
  };

  // Odometer over coordinates 2..d-1; coordinate 1 is the work-sharing axis.
  auto scan_block = [&](const Int& a1, std::vector<Elem>& sink) {
    std::vector<Int> tail(d - 1);
    tail[0] = a1;
    if (d == 2) {
      scan_tail(tail, sink);
      return;
    }
    for (int i = 1; i < d - 1; ++i) tail[i] = cr.r[i + 1].first;
    for (;;) {
      scan_tail(tail, sink);
      int i = 1;
      for (; i < d - 1; ++i) {
        if (tail[i] < cr.r[i + 1].second) {
          ++tail[i];
          break;
        }
        tail[i] = cr.r[i + 1].first;
      }
      if (i == d - 1) break;
    }
  };

  std::vector<Elem> out;
  const Int lo1 = cr.r[1].first, hi1 = cr.r[1].second;
  if (threads <= 1 || hi1 < lo1 + threads) {
    for (Int a1 = lo1; a1 <= hi1; ++a1) scan_block(a1, out);
  } else {
    std::vector<std::vector<Elem>> parts(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w]() {
        Int a1 = lo1 + w;
        for (; a1 <= hi1; a1 += threads) scan_block(a1, parts[w]);
      });
    for (std::thread& t : pool) t.join();
    for (auto& p : parts)
      out.insert(out.end(), std::make_move_iterator(p.begin()),
                 std::make_move_iterator(p.end()));
  }
  std::sort(out.begin(), out.end());
  return {std::move(out), 0, true};
}

starset::PointSet enumerate_radius(const ModelSetSpec& spec, const Rat& radius,
                                   int threads) {
  const NumberFieldContext& ctx = spec.ctx;
  if (radius <= 0) throw usage_error("enumeration radius must be positive");
  if (ctx.degree() == 2 && ctx.lambda_is_real() &&
      ctx.real_unit_interval_indices().size() == 1)
    return enumerate_quadratic(spec, radius);
  return enumerate_radius_lattice(spec, radius, threads);
}

std::vector<Int> ap_intersection(const ModelSetSpec& spec, const Elem& x,
                                 const Elem& d) {
  const NumberFieldContext& ctx = spec.ctx;
  check_size(ctx, x);
  check_size(ctx, d);
  if (std::all_of(d.begin(), d.end(), [](const Int& c) { return c == 0; }))
    throw usage_error("progression direction must be nonzero");
  std::vector<int> widx = ctx.real_unit_interval_indices();
  if (widx.empty())
    throw usage_error(
        "progression slicing needs a nontrivial strong PV parameter");

  QElem qx = ctx.to_q(x), qd = ctx.to_q(d), qdinv = ctx.qinverse(ctx.to_q(d));
  bool any = false, empty = false;
  Int jlo, jhi;
  for (std::size_t s = 0; s < widx.size(); ++s) {
    int j = widx[s];
    int sgn = ctx.sign_at(d, j);
    if (sgn == 0) continue;
    QElem tlo = ctx.qmul(ctx.qsub(ctx.to_q(spec.lo[s]), qx), qdinv);
    QElem thi = ctx.qmul(ctx.qsub(ctx.to_q(spec.hi[s]), qx), qdinv);
    Int a = sgn > 0 ? ctx.ceil_value(tlo, j) : ctx.ceil_value(thi, j);
    Int b = sgn > 0 ? ctx.floor_value(thi, j) : ctx.floor_value(tlo, j);
    if (!any) {
      jlo = a;
      jhi = b;
      any = true;
    } else {
      if (a > jlo) jlo = a;
      if (b < jhi) jhi = b;
    }
    if (any && jlo > jhi) empty = true;
  }
  if (!any)
    throw internal_error(
        "direction vanishes on every windowed conjugate; the parameter "
        "cannot be a nontrivial strong PV number");
  std::vector<Int> out;
  if (!empty)
    for (Int j = jlo; j <= jhi; ++j) out.push_back(j);
  return out;
}

SchemeMatrices build_scheme(const NumberFieldContext& ctx) {
  require_spv(ctx, "scheme construction");
  const int d = ctx.degree();
  const IntPolynomial& p = ctx.minpoly();

  SchemeMatrices sm;
  sm.companion.assign(d, std::vector<Int>(d, Int(0)));
  for (int i = 0; i < d; ++i) {
    if (i + 1 < d) sm.companion[i + 1][i] = 1;
    sm.companion[i][d - 1] = -p.c[i];
  }

  // Row order: windowed conjugates, then the designated root, then the rest.
  std::vector<int> order = ctx.real_unit_interval_indices();
  order.push_back(ctx.lambda_index());
  for (int i = 0; i < d; ++i)
    if (std::find(order.begin(), order.end(), i) == order.end())
      order.push_back(i);
  sm.row_roots = order;

  const Rat eps = Rat(1, Int(1) << 64);
  for (int i : order) {
    ComplexBox root = ctx.root_enclosure(i, eps).box();
    sm.diagonal.push_back(root);
    std::vector<ComplexBox> row;
    ComplexBox pw = ComplexBox::point(Rat(1), Rat(0));
    for (int k = 0; k < d; ++k) {
      row.push_back(pw);
      pw = (pw * root).round_out(192);
    }
    sm.vandermonde.push_back(std::move(row));
  }

  // Exact identity: the minimal polynomial annihilates lambda in the ring,
  // which is precisely row-times-companion = root-times-row at every root.
  Elem acc = ctx.pow(ctx.lambda(), static_cast<unsigned>(d));
  for (int i = 0; i < d; ++i)
    acc = ctx.add(acc, ctx.mul_int(ctx.pow(ctx.lambda(), static_cast<unsigned>(i)), p.c[i]));
  if (acc != ctx.zero())
    throw internal_error("companion identity failed exactly");

  // Interval confirmation of every entry of V*companion - D*V.
  for (int r = 0; r < d; ++r)
    for (int col = 0; col < d; ++col) {
      ComplexBox lhs = ComplexBox::point(Rat(0), Rat(0));
      for (int m = 0; m < d; ++m)
        lhs = lhs + sm.vandermonde[r][m] *
                        ComplexBox::point(Rat(sm.companion[m][col]), Rat(0));
      ComplexBox diff = lhs - sm.diagonal[r] * sm.vandermonde[r][col];
      if (!diff.re.contains_zero() || !diff.im.contains_zero())
        throw internal_error("companion identity failed at interval precision");
    }

  // Spot-check that distinct small lattice vectors keep distinct windowed
  // images (full injectivity is a theorem; this guards the arithmetic).
  std::vector<int> widx = ctx.real_unit_interval_indices();
  if (!widx.empty()) {
    std::vector<Int> coords(d, Int(-1));
    for (;;) {
      bool zero = std::all_of(coords.begin(), coords.end(),
                              [](const Int& c) { return c == 0; });
      if (!zero) {
        ++sm.injectivity_samples;
        bool separated = false;
        for (int j : widx)
          if (ctx.sign_at(coords, j) != 0) {
            separated = true;
            break;
          }
        if (!separated) sm.injective_on_samples = false;
      }
      int i = 0;
      for (; i < d; ++i) {
        if (coords[i] < 1) {
          ++coords[i];
          break;
        }
        coords[i] = -1;
      }
      if (i == d) break;
    }
  }
  return sm;
}

bool integer_superset_member(const Int& lambda_int, const Int& n) {
  if (lambda_int < 2) throw usage_error("integer parameter must be at least 2");
  auto residue_ok = [&](const Int& m) {
    Int r = n % m;
    if (r < 0) r += m;
    return r == 0 || r == 1;
  };
  return residue_ok(lambda_int) && residue_ok(lambda_int - 1);
}

std::vector<Elem> sorted_by_value(const NumberFieldContext& ctx,
                                  std::vector<Elem> pts) {
  if (!ctx.lambda_is_real())
    throw usage_error("value ordering needs a real designated root");
  for (const Elem& e : pts) check_size(ctx, e);
  std::sort(pts.begin(), pts.end(), [&](const Elem& a, const Elem& b) {
    return ctx.sign_at(ctx.sub(a, b), ctx.lambda_index()) < 0;
  });
  return pts;
}

}  // namespace fpx::modelset
