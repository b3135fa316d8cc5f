#include "fpx/density.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace fpx::density {

using algebra::ComplexBox;
using algebra::Elem;
using algebra::IntPolynomial;
using algebra::NumberFieldContext;
using algebra::QElem;
using algebra::RationalInterval;

namespace {

int single_window_index(const NumberFieldContext& ctx) {
  auto idx = ctx.real_unit_interval_indices();
  if (idx.size() != 1)
    throw usage_error(
        "density machinery needs exactly one conjugate inside (0,1)");
  return idx[0];
}

void require_unit_window(const modelset::ModelSetSpec& spec) {
  for (std::size_t i = 0; i < spec.lo.size(); ++i)
    if (spec.lo[i] != spec.ctx.zero() || spec.hi[i] != spec.ctx.one())
      throw usage_error("density machinery expects the [0,1] window");
}

void require_contracting_unit(const NumberFieldContext& ctx, const Elem& alpha,
                              int w) {
  Int nm = ctx.norm(alpha);
  if (nm != 1 && nm != -1)
    throw usage_error("alpha must be a unit of the coefficient ring");
  if (ctx.sign_at(alpha, w) <= 0 ||
      ctx.sign_at(ctx.sub(ctx.one(), alpha), w) <= 0)
    throw usage_error(
        "alpha is not contracting on the window side: its image there must "
        "lie in (0,1)");
}

// y' - x' <= beta/(1-beta), rewritten as (y-x)(1-alpha) - alpha <= 0 at the
// window root, where beta is the image of alpha there.
bool gap_ok(const NumberFieldContext& ctx, const Elem& alpha, const Elem& x,
            const Elem& y, int w) {
  Elem g = ctx.sub(ctx.mul(ctx.sub(y, x), ctx.sub(ctx.one(), alpha)), alpha);
  return ctx.sign_at(g, w) <= 0;
}

Elem abs_real(const NumberFieldContext& ctx, const Elem& e) {
  return ctx.sign_at(e, ctx.lambda_index()) < 0 ? ctx.neg(e) : e;
}

// Sign of |a| - |b| at the designated root; exact for real contexts, box
// refinement with a cap otherwise (0 when the cap leaves it unresolved).
int cmp_abs(const NumberFieldContext& ctx, const Elem& a, const Elem& b) {
  int li = ctx.lambda_index();
  if (ctx.lambda_is_real())
    return ctx.sign_at(ctx.sub(abs_real(ctx, a), abs_real(ctx, b)), li);
  Rat eps(1, Int(1) << 32);
  for (int round = 0; round < 40; ++round) {
    RationalInterval sa = ctx.value_box(a, li, eps).abs_square();
    RationalInterval sb = ctx.value_box(b, li, eps).abs_square();
    if (sa.hi < sb.lo) return -1;
    if (sa.lo > sb.hi) return 1;
    eps /= 65536;
  }
  return 0;
}

void sort_by_image(const NumberFieldContext& ctx, std::vector<Elem>& pts,
                   int w) {
  std::sort(pts.begin(), pts.end(), [&](const Elem& a, const Elem& b) {
    return ctx.sign_at(ctx.sub(a, b), w) < 0;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Endpoints, window membership, and adjacent overlaps of an image-sorted
// point list; returns the number of gap comparisons that passed.
std::size_t verify_cover(const NumberFieldContext& ctx, const Elem& alpha,
                         const std::vector<Elem>& pts, int w, bool internal) {
  auto fail = [&](const std::string& what) -> Error {
    return internal ? internal_error(what) : usage_error(what);
  };
  if (pts.empty() || pts.front() != ctx.zero())
    throw fail("a cover must contain 0");
  if (pts.back() != ctx.one()) throw fail("a cover must contain 1");
  std::size_t checks = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!gap_ok(ctx, alpha, pts[i], pts[i + 1], w))
      throw fail("cover gap between consecutive images exceeds the "
                 "contraction width");
    ++checks;
  }
  return checks;
}

Elem norm_max(const NumberFieldContext& ctx, const std::vector<Elem>& pts) {
  const Elem* best = &pts.front();
  for (const Elem& p : pts)
    if (cmp_abs(ctx, p, *best) > 0) best = &p;
  return *best;
}

// One reduction step: `value` equals aux * cont or cont * aux under the
// derivation parameter, with aux a constant or cover point.
struct RawStep {
  Elem aux;
  bool aux_left = false;
  Elem value;
};

starset::Derivation assemble(const QElem& param,
                             const std::vector<RawStep>& chain,
                             const Elem& final_value) {
  starset::Derivation d;
  d.param = param;
  std::map<Elem, std::string> base_ids;
  auto base_of = [&](const Elem& e) {
    auto it = base_ids.find(e);
    if (it != base_ids.end()) return it->second;
    std::string id = "s" + std::to_string(base_ids.size());
    base_ids.emplace(e, id);
    starset::DerivationStep st;
    st.id = id;
    st.base = true;
    st.value = e;
    d.steps.push_back(std::move(st));
    return id;
  };
  std::string cont = base_of(final_value);
  int stars = 0;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    std::string aux = base_of(it->aux);
    std::string id = "p" + std::to_string(++stars);
    starset::DerivationStep st;
    st.id = id;
    st.left = it->aux_left ? aux : cont;
    st.right = it->aux_left ? cont : aux;
    st.value = it->value;
    d.steps.push_back(std::move(st));
    cont = std::move(id);
  }
  d.target = cont;
  return d;
}

}  // namespace

ConvergentTable convergent_table(const NumberFieldContext& ctx,
                                 std::size_t count) {
  int w = single_window_index(ctx);
  if (ctx.degree() != 2 || !ctx.lambda_is_real())
    throw usage_error("convergent tables need a real quadratic context");
  auto cf = algebra::surd_continued_fraction(ctx, ctx.lambda(), w);
  auto conv = algebra::convergents(cf, count);
  ConvergentTable t;
  for (std::size_t k = 0; k < conv.size(); ++k) {
    t.a.push_back(cf.term(k));
    t.p.push_back(conv[k].p);
    t.q.push_back(conv[k].q);
    Elem e = ctx.sub(ctx.mul_int(ctx.lambda(), conv[k].q),
                     ctx.from_int(conv[k].p));
    if (k % 2 == 1) e = ctx.neg(e);
    if (ctx.sign_at(e, w) <= 0)
      throw internal_error("convergent remainder lost its sign");
    t.eta.push_back(std::move(e));
  }
  return t;
}

CoverSet cover_set_quadratic(const NumberFieldContext& ctx,
                             const Elem& alpha) {
  int w = single_window_index(ctx);
  if (ctx.degree() != 2 || !ctx.lambda_is_real())
    throw usage_error("the convergent cover needs a real quadratic context");
  require_contracting_unit(ctx, alpha, w);

  CoverSet cover;
  cover.alpha = alpha;

  // beta >= 1/2 already makes {0,1} a cover.
  if (ctx.sign_at(ctx.sub(ctx.mul_int(alpha, 2), ctx.one()), w) >= 0) {
    cover.points = {ctx.zero(), ctx.one()};
    cover.n = 0;
    cover.m = 0;
    cover.bound_elem = ctx.one();
    cover.max_elem = ctx.one();
    cover.gap_checks = verify_cover(ctx, alpha, cover.points, w, true);
    return cover;
  }

  auto cf = algebra::surd_continued_fraction(ctx, ctx.lambda(), w);
  if (cf.term(0) != 0)
    throw internal_error("window image outside (0,1) in the convergent cover");

  // Walk the convergents until eta_k + eta_{k-1} <= beta/(1-beta).
  Int pk = 0, qk = 1, pk1 = 1, qk1 = 0;  // k = 0 and k = -1 entries
  Elem eta_prev = ctx.one();             // eta_{-1}
  Elem eta_k = ctx.lambda();             // eta_0: image is the window root
  long k = 0;
  for (;; ++k) {
    if (k > 400)
      throw internal_error("convergent search exceeded 400 terms");
    Elem h = ctx.add(eta_k, eta_prev);
    if (gap_ok(ctx, alpha, ctx.zero(), h, w)) break;
    Int a = cf.term(static_cast<std::size_t>(k) + 1);
    Int pn = a * pk + pk1, qn = a * qk + qk1;
    pk1 = pk;
    qk1 = qk;
    pk = pn;
    qk = qn;
    Elem e = ctx.sub(ctx.mul_int(ctx.lambda(), qk), ctx.from_int(pk));
    if ((k + 1) % 2 == 1) e = ctx.neg(e);
    eta_prev = std::move(eta_k);
    eta_k = std::move(e);
  }

  if (qk > 2000000)
    throw budget_error("covering set would hold more than 2000000 points");
  long n = static_cast<long>(qk) - 1;
  bool lam_pos = ctx.sign_at(ctx.lambda(), ctx.lambda_index()) > 0;
  long m;
  if (n % 2 == 0)
    m = -(n / 2);
  else
    m = lam_pos ? -((n - 1) / 2) : -((n + 1) / 2);

  auto point_at = [&](long b) {
    Elem bl = ctx.mul_int(ctx.lambda(), Int(b));
    return ctx.sub(ctx.from_int(ctx.ceil_value(bl, w)), bl);
  };
  std::vector<Elem> pts;
  for (long b = m; b <= m + n; ++b) pts.push_back(point_at(b));
  pts.push_back(ctx.one());
  sort_by_image(ctx, pts, w);

  cover.points = std::move(pts);
  cover.cf_k = k;
  cover.q_k = qk;
  cover.n = n;
  cover.m = m;
  if (n == 0) {
    cover.bound_elem = ctx.one();
    cover.max_elem = ctx.one();
  } else {
    // The norm maximum sits at one end of the multiplier range; keep the
    // lower end separately, since for a negative parameter and even n the
    // two ends differ by exactly 1.
    Elem lo_end = point_at(m);
    Elem hi_end = point_at(m + n);
    cover.bound_elem = lo_end;
    cover.max_elem = cmp_abs(ctx, lo_end, hi_end) >= 0 ? lo_end
                                                       : std::move(hi_end);
  }
  cover.gap_checks = verify_cover(ctx, alpha, cover.points, w, true);
  return cover;
}

CoverSet cover_set_greedy(const modelset::ModelSetSpec& spec,
                          const Elem& alpha, const Rat& radius) {
  const NumberFieldContext& ctx = spec.ctx;
  int w = single_window_index(ctx);
  require_unit_window(spec);
  require_contracting_unit(ctx, alpha, w);

  starset::PointSet pool = modelset::enumerate_radius(spec, radius);
  std::vector<Elem> pts = pool.elements;
  sort_by_image(ctx, pts, w);
  if (pts.empty() || pts.front() != ctx.zero() || pts.back() != ctx.one())
    throw budget_error("cover pool at this radius misses an endpoint of the "
                       "window");

  std::vector<Elem> chosen = {ctx.zero()};
  std::size_t cur = 0;
  while (pts[cur] != ctx.one()) {
    // Furthest point whose interval still overlaps the current reach.
    std::size_t best = cur;
    for (std::size_t j = cur + 1;
         j < pts.size() && gap_ok(ctx, alpha, pts[cur], pts[j], w); ++j)
      best = j;
    if (best == cur)
      throw budget_error("cover pool at this radius leaves a gap; enlarge "
                         "the search radius");
    chosen.push_back(pts[best]);
    cur = best;
  }

  CoverSet cover;
  cover.alpha = alpha;
  cover.points = std::move(chosen);
  cover.max_elem = norm_max(ctx, cover.points);
  cover.bound_elem = cover.max_elem;
  cover.gap_checks = verify_cover(ctx, alpha, cover.points, w, true);
  return cover;
}

CoverSet cover_set_from_points(const NumberFieldContext& ctx,
                               const Elem& alpha,
                               const std::vector<Elem>& points) {
  int w = single_window_index(ctx);
  require_contracting_unit(ctx, alpha, w);
  if (points.empty()) throw usage_error("a cover needs at least two points");
  modelset::ModelSetSpec msp = modelset::unit_spec(ctx);
  for (const Elem& p : points)
    if (!modelset::member(msp, p))
      throw usage_error("cover points must lie in the model set");
  std::vector<Elem> pts = points;
  sort_by_image(ctx, pts, w);
  CoverSet cover;
  cover.alpha = alpha;
  cover.gap_checks = verify_cover(ctx, alpha, pts, w, false);
  cover.points = std::move(pts);
  cover.max_elem = norm_max(ctx, cover.points);
  cover.bound_elem = cover.max_elem;
  return cover;
}

SeedPlan seed_plan(const modelset::ModelSetSpec& spec, CoverSet cover) {
  const NumberFieldContext& ctx = spec.ctx;
  single_window_index(ctx);
  require_unit_window(spec);
  int li = ctx.lambda_index();

  SeedPlan plan;
  if (ctx.lambda_is_real()) {
    QElem num = ctx.to_q(abs_real(ctx, ctx.sub(cover.alpha, ctx.one())));
    QElem den = ctx.qsub(ctx.to_q(abs_real(ctx, cover.alpha)),
                         ctx.to_q(ctx.one()));
    QElem m = ctx.qmul(ctx.qmul(num, ctx.qinverse(den)),
                       ctx.to_q(abs_real(ctx, cover.max_elem)));
    Rat eps(1, Int(1) << 48);
    plan.bound = ctx.value_box(m, li, eps).re;
    plan.bound_exact = std::move(m);
  } else {
    bool done = false;
    for (unsigned bits = 48; bits <= 368 && !done; bits += 64) {
      Rat eps(1, Int(1) << bits);
      auto abs_box = [&](const Elem& e) {
        return algebra::sqrt_outer(ctx.value_box(e, li, eps).abs_square(),
                                   bits);
      };
      RationalInterval den =
          abs_box(cover.alpha) - RationalInterval::point(1);
      if (den.lo <= 0) continue;
      RationalInterval m = abs_box(ctx.sub(cover.alpha, ctx.one())) / den *
                           abs_box(cover.max_elem);
      if (m.width() <= Rat(1, 1000000000)) {
        plan.bound = m;
        done = true;
      }
    }
    if (!done)
      throw internal_error("norm bound enclosure failed to converge");
  }

  starset::PointSet pool = modelset::enumerate_radius(spec, plan.bound.hi);
  starset::PointSet seeds;
  seeds.rank_reached = 0;
  for (const Elem& y : pool.elements) {
    bool keep;
    if (plan.bound_exact) {
      QElem diff = ctx.qsub(*plan.bound_exact, ctx.to_q(abs_real(ctx, y)));
      keep = ctx.sign_at(diff, li) >= 0;
    } else {
      RationalInterval m2 = plan.bound.square();
      Rat eps(1, Int(1) << 48);
      keep = false;
      bool decided = false;
      for (int round = 0; round < 8 && !decided; ++round) {
        RationalInterval s = ctx.value_box(y, li, eps).abs_square();
        if (s.hi <= m2.lo) {
          keep = true;
          decided = true;
        } else if (s.lo > m2.hi) {
          decided = true;
        }
        eps /= Int(1) << 40;
      }
      if (!decided)
        throw internal_error("seed ball boundary comparison unresolved");
    }
    if (keep) seeds.elements.push_back(y);
  }
  for (const Elem& x : cover.points)
    if (!starset::point_set_contains(seeds, x))
      throw internal_error("cover point escaped the seed ball");
  plan.seeds = std::move(seeds);
  plan.cover = std::move(cover);
  return plan;
}

starset::Derivation reduce_to_seed(const modelset::ModelSetSpec& spec,
                                   const SeedPlan& plan, const Elem& z) {
  const NumberFieldContext& ctx = spec.ctx;
  int w = single_window_index(ctx);
  require_unit_window(spec);
  if (!modelset::member(spec, z))
    throw usage_error("the value to reduce must lie in the model set");

  const Elem& alpha = plan.cover.alpha;
  QElem ainv = ctx.qinverse(ctx.to_q(alpha));
  std::vector<RawStep> chain;
  Elem cur = z;
  for (int iter = 0; !starset::point_set_contains(plan.seeds, cur); ++iter) {
    if (iter > 100000)
      throw internal_error("seed reduction did not terminate");
    const Elem* best = nullptr;
    for (const Elem& x : plan.cover.points) {
      // (1-beta)x' <= z' <= (1-beta)x' + beta, via signs at the window root.
      Elem ax = ctx.mul(alpha, x);
      if (ctx.sign_at(ctx.sub(ctx.sub(x, ax), cur), w) > 0) continue;
      if (ctx.sign_at(ctx.sub(ctx.add(ctx.sub(cur, x), ax), alpha), w) > 0)
        continue;
      if (!best) {
        best = &x;
        continue;
      }
      int c = cmp_abs(ctx, x, *best);
      if (c < 0 || (c == 0 && x < *best)) best = &x;
    }
    if (!best)
      throw internal_error(
          "no cover interval contains the image of the value being reduced");
    QElem yq = starset::star_q(ctx, ainv, ctx.to_q(*best), ctx.to_q(cur));
    if (!NumberFieldContext::is_int_elem(yq))
      throw internal_error("reduction step left the coefficient ring");
    Elem y = ctx.to_elem(yq);
    if (!modelset::member(spec, y))
      throw internal_error("reduction step left the model set");
    if (cmp_abs(ctx, y, cur) >= 0)
      throw internal_error("reduction step did not decrease the norm");
    chain.push_back({*best, true, cur});
    cur = std::move(y);
  }
  return assemble(ctx.to_q(alpha), chain, cur);
}

namespace {

// The families whose model set is closed under one-sided extrapolation by
// 0 and 1, keyed by minimal polynomial.  `star_is_lambda` says whether the
// normalized parameter (golden: window image < 1/2 and both of lambda,
// 1-lambda units; otherwise image > 1/2 and index-2 quotient ring) is the
// designated root itself.
struct Family {
  bool golden;
  bool star_is_lambda;
};

std::optional<Family> family_of(const IntPolynomial& p) {
  static const std::vector<std::pair<const char*, Family>> table = {
      {"x^2-3x+1", {true, true}},   {"x^2+x-1", {true, false}},
      {"x^2-4x+2", {false, true}},  {"x^2+2x-1", {false, false}},
      {"x^2+2x-2", {false, true}},  {"x^2-4x+1", {false, false}},
  };
  for (const auto& [text, fam] : table)
    if (p == IntPolynomial::parse(text)) return fam;
  return std::nullopt;
}

}  // namespace

std::vector<Elem> replication_base(const NumberFieldContext& ctx) {
  auto fam = family_of(ctx.minpoly());
  if (!fam)
    throw usage_error(
        "replication supports only the three unitary quadratic families");
  Elem om = ctx.sub(ctx.one(), ctx.lambda());
  std::vector<Elem> base = {ctx.zero(), ctx.one(), ctx.lambda(), om};
  if (fam->golden) {
    Elem lamstar = fam->star_is_lambda ? ctx.lambda() : om;
    base.push_back(ctx.sub(ctx.one(), ctx.mul_int(lamstar, 2)));
  }
  return base;
}

starset::Derivation replication_reduce(const NumberFieldContext& ctx,
                                       const Elem& z) {
  auto fam = family_of(ctx.minpoly());
  if (!fam)
    throw usage_error(
        "replication supports only the three unitary quadratic families");
  int w = single_window_index(ctx);
  Elem lamstar =
      fam->star_is_lambda ? ctx.lambda() : ctx.sub(ctx.one(), ctx.lambda());
  int half = ctx.sign_at(ctx.sub(ctx.mul_int(lamstar, 2), ctx.one()), w);
  if (fam->golden ? half >= 0 : half <= 0)
    throw internal_error("unexpected window image for the normalized "
                         "replication parameter");

  modelset::ModelSetSpec msp = modelset::unit_spec(ctx);
  if (!modelset::member(msp, z))
    throw usage_error("the value to reduce must lie in the model set");

  std::vector<Elem> base = replication_base(ctx);
  Elem um = ctx.sub(ctx.one(), lamstar);
  std::vector<RawStep> chain;
  Elem cur = z;
  for (int iter = 0;
       std::find(base.begin(), base.end(), cur) == base.end(); ++iter) {
    if (iter > 100000)
      throw internal_error("replication reduction did not terminate");
    Elem y;
    RawStep st;
    if (fam->golden) {
      // Right-extrapolation only: the unit 1-lambda* divides everything.
      bool hi = ctx.sign_at(ctx.sub(cur, um), w) > 0;
      Elem num = hi ? ctx.sub(cur, lamstar) : cur;
      if (!ctx.divide(num, um, y))
        throw internal_error("inverse extrapolation left the ring");
      st = {hi ? ctx.one() : ctx.zero(), false, cur};
    } else {
      int c0 = ctx.sign_at(ctx.sub(cur, um), w);   // image vs 1 - mu
      int c1 = ctx.sign_at(ctx.sub(cur, lamstar), w);  // image vs mu
      if (c0 <= 0) {
        if (!ctx.divide(cur, um, y))
          throw internal_error("inverse extrapolation left the ring");
        st = {ctx.zero(), false, cur};
      } else if (c1 >= 0) {
        if (!ctx.divide(ctx.sub(cur, lamstar), um, y))
          throw internal_error("inverse extrapolation left the ring");
        st = {ctx.one(), false, cur};
      } else if (ctx.divide(cur, lamstar, y)) {
        st = {ctx.zero(), true, cur};  // cur = 0 star y
      } else if (ctx.divide(ctx.sub(cur, um), lamstar, y)) {
        st = {ctx.one(), true, cur};  // cur = 1 star y
      } else {
        throw internal_error("middle band residue matched neither class");
      }
    }
    if (!modelset::member(msp, y))
      throw internal_error("reduction step left the model set");
    if (cmp_abs(ctx, y, cur) >= 0)
      throw internal_error("reduction step did not decrease the norm");
    chain.push_back(std::move(st));
    cur = std::move(y);
  }
  return assemble(ctx.to_q(lamstar), chain, cur);
}

std::pair<RationalInterval, RationalInterval> cubic_coefficient_bounds(
    const NumberFieldContext& ctx, const RationalInterval& m_bound) {
  if (ctx.degree() != 3 || ctx.lambda_is_real())
    throw usage_error(
        "coefficient bounds apply to cubic contexts with a complex "
        "designated root");
  int w = single_window_index(ctx);
  int li = ctx.lambda_index();
  RationalInterval mp1 = m_bound + RationalInterval::point(1);
  for (unsigned bits = 64; bits <= 320; bits += 64) {
    Rat eps(1, Int(1) << bits);
    RationalInterval mu = ctx.root_enclosure(w, eps).x;
    ComplexBox lam = ctx.root_enclosure(li, eps).box();
    RationalInterval y = lam.im;
    if (y.hi < 0) y = -y;
    if (y.lo <= 0) continue;
    ComplexBox mu_box(mu, RationalInterval::point(0));
    RationalInterval r_sharp =
        algebra::sqrt_outer((mu_box + lam).abs_square(), bits);
    RationalInterval r_axis =
        algebra::sqrt_outer(mu.square() + y.square(), bits);
    // Any r at least |mu + lambda| keeps the truncation valid; the maximum
    // of the two stays safe in every orientation of Re(lambda).
    RationalInterval r(std::max(r_sharp.lo, r_axis.lo),
                       std::max(r_sharp.hi, r_axis.hi));
    RationalInterval dist =
        algebra::sqrt_outer((mu_box - lam).abs_square(), bits);
    RationalInterval den = y * dist;
    if (den.lo <= 0) continue;
    RationalInterval bb = r * mp1 / den;
    RationalInterval cc = mp1 / den;
    if (bb.width() <= Rat(1, 1000000) && cc.width() <= Rat(1, 1000000))
      return {bb, cc};
  }
  throw internal_error("coefficient bound enclosure failed to converge");
}

}  // namespace fpx::density
