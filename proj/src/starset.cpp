#include "fpx/starset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <thread>

#include "fpx/error.hpp"
#include "fpx/spv.hpp"

namespace fpx::starset {

using algebra::Elem;
using algebra::NumberFieldContext;
using algebra::QElem;

namespace {

void check_size(const NumberFieldContext& ctx, const Elem& e) {
  if (static_cast<int>(e.size()) != ctx.degree())
    throw usage_error("element does not belong to this context");
}

void check_size(const NumberFieldContext& ctx, const QElem& e) {
  if (static_cast<int>(e.size()) != ctx.degree())
    throw usage_error("element does not belong to this context");
}

double approx_abs(const NumberFieldContext& ctx, const Elem& e) {
  QElem q = ctx.to_q(e);
  double re = ctx.approx_at(q, ctx.lambda_index(), false);
  if (ctx.lambda_is_real()) return std::fabs(re);
  double im = ctx.approx_at(q, ctx.lambda_index(), true);
  return std::hypot(re, im);
}

QElem const_q(const NumberFieldContext& ctx, const Rat& v) {
  QElem q(ctx.degree(), Rat(0));
  q[0] = v;
  return q;
}

}  // namespace

// --- interpolation step ------------------------------------------------

Elem star(const NumberFieldContext& ctx, const Elem& a, const Elem& b) {
  return star(ctx, ctx.lambda(), a, b);
}

Elem star(const NumberFieldContext& ctx, const Elem& param, const Elem& a,
          const Elem& b) {
  check_size(ctx, param);
  check_size(ctx, a);
  check_size(ctx, b);
  return ctx.add(a, ctx.mul(param, ctx.sub(b, a)));
}

QElem star_q(const NumberFieldContext& ctx, const QElem& a, const QElem& b) {
  return star_q(ctx, ctx.to_q(ctx.lambda()), a, b);
}

QElem star_q(const NumberFieldContext& ctx, const QElem& param, const QElem& a,
             const QElem& b) {
  check_size(ctx, param);
  check_size(ctx, a);
  check_size(ctx, b);
  return ctx.qadd(a, ctx.qmul(param, ctx.qsub(b, a)));
}

Rat star_rational(const Rat& param, const Rat& a, const Rat& b) {
  return a + param * (b - a);
}

// --- ambient shape -----------------------------------------------------------

const char* closure_shape_str(ClosureShape s) {
  switch (s) {
    case ClosureShape::unit_interval:
      return "unit-interval";
    case ClosureShape::real_line:
      return "real-line";
    case ClosureShape::complex_plane:
      return "complex-plane";
  }
  return "?";
}

ClosureShape closure_shape(const NumberFieldContext& ctx) {
  if (!ctx.lambda_is_real()) return ClosureShape::complex_plane;
  Elem lam = ctx.lambda();
  int at0 = ctx.sign_at(lam, ctx.lambda_index());
  int at1 = ctx.sign_at(ctx.sub(lam, ctx.one()), ctx.lambda_index());
  if (at0 >= 0 && at1 <= 0) return ClosureShape::unit_interval;
  return ClosureShape::real_line;
}

ClosureShape closure_shape_rational(const Rat& lambda) {
  if (lambda >= 0 && lambda <= 1) return ClosureShape::unit_interval;
  return ClosureShape::real_line;
}

// --- point sets ------------------------------------------------------------------

bool point_set_contains(const PointSet& s, const Elem& x) {
  return std::binary_search(s.elements.begin(), s.elements.end(), x);
}

namespace {

// One expansion round: all ordered-pair interpolations over pts, merged into
// acc.  Partitioned across threads; the merge is order-independent.
void expand_level(const NumberFieldContext& ctx, const Elem& param,
                  const std::vector<Elem>& pts, std::set<Elem>& acc,
                  int threads) {
  std::size_t n = pts.size();
  int workers = std::max(1, threads);
  if (workers > 1 && n >= 64) {
    std::vector<std::set<Elem>> local(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < n; i += workers)
          for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            local[t].insert(star(ctx, param, pts[i], pts[j]));
          }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& l : local) acc.insert(l.begin(), l.end());
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      acc.insert(star(ctx, param, pts[i], pts[j]));
    }
}

}  // namespace

PointSet closure_rank(const NumberFieldContext& ctx,
                      const std::vector<Elem>& seed, int n,
                      const SearchBudget& budget, int threads) {
  return closure_rank_with(ctx, ctx.lambda(), seed, n, budget, threads);
}

PointSet closure_rank_with(const NumberFieldContext& ctx, const Elem& param,
                           const std::vector<Elem>& seed, int n,
                           const SearchBudget& budget, int threads) {
  if (n < 0) throw usage_error("closure level must be nonnegative");
  if (seed.empty()) throw usage_error("closure needs a nonempty seed set");
  check_size(ctx, param);
  for (const Elem& e : seed) check_size(ctx, e);

  std::set<Elem> cur(seed.begin(), seed.end());
  for (int level = 0; level < n; ++level) {
    std::vector<Elem> pts(cur.begin(), cur.end());
    std::set<Elem> next = cur;
    expand_level(ctx, param, pts, next, threads);
    if (next.size() > budget.max_points)
      throw budget_error("closure expansion passed " +
                         std::to_string(budget.max_points) +
                         " points; finished level " + std::to_string(level));
    if (next.size() == cur.size()) break;  // fixed point
    cur.swap(next);
  }

  PointSet out;
  out.elements.assign(cur.begin(), cur.end());
  out.rank_reached = n;
  out.saturated = true;
  return out;
}

std::vector<QElem> closure_rank_q(const NumberFieldContext& ctx,
                                  const std::vector<QElem>& seed, int n,
                                  std::size_t max_points) {
  if (n < 0) throw usage_error("closure level must be nonnegative");
  if (seed.empty()) throw usage_error("closure needs a nonempty seed set");
  for (const QElem& e : seed) check_size(ctx, e);
  QElem param = ctx.to_q(ctx.lambda());

  std::set<QElem> cur(seed.begin(), seed.end());
  for (int level = 0; level < n; ++level) {
    std::vector<QElem> pts(cur.begin(), cur.end());
    std::set<QElem> next = cur;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (i == j) continue;
        next.insert(star_q(ctx, param, pts[i], pts[j]));
      }
    if (next.size() > max_points)
      throw budget_error("closure expansion passed " +
                         std::to_string(max_points) +
                         " points; finished level " + std::to_string(level));
    if (next.size() == cur.size()) break;
    cur.swap(next);
  }
  return std::vector<QElem>(cur.begin(), cur.end());
}

// --- windows ----------------------------------------------------------------------

Window unit_window(const NumberFieldContext& ctx) {
  Window w;
  w.bounds.assign(ctx.real_unit_interval_indices().size(), {Rat(0), Rat(1)});
  return w;
}

Window window_from_seeds(const NumberFieldContext& ctx,
                         const std::vector<Elem>& seed) {
  if (seed.empty()) throw usage_error("window hull needs a nonempty seed set");
  static const Rat eps(Int(1), Int(1) << 48);
  Window w;
  for (int idx : ctx.real_unit_interval_indices()) {
    Rat lo, hi;
    bool first = true;
    for (const Elem& e : seed) {
      check_size(ctx, e);
      algebra::ComplexBox box = ctx.value_box(e, idx, eps);
      if (first || box.re.lo < lo) lo = box.re.lo;
      if (first || box.re.hi > hi) hi = box.re.hi;
      first = false;
    }
    w.bounds.emplace_back(lo, hi);
  }
  return w;
}

bool window_contains(const NumberFieldContext& ctx, const Window& w,
                     const Elem& x) {
  const std::vector<int>& idx = ctx.real_unit_interval_indices();
  if (w.bounds.size() != idx.size())
    throw usage_error("window does not match this context");
  check_size(ctx, x);
  QElem q = ctx.to_q(x);
  for (std::size_t t = 0; t < idx.size(); ++t) {
    const auto& [lo, hi] = w.bounds[t];
    if (lo > hi) throw usage_error("window interval is empty");
    if (ctx.sign_at(ctx.qsub(q, const_q(ctx, lo)), idx[t]) < 0) return false;
    if (ctx.sign_at(ctx.qsub(q, const_q(ctx, hi)), idx[t]) > 0) return false;
  }
  return true;
}

// --- derivations -------------------------------------------------------------------

Elem replay_derivation(const NumberFieldContext& ctx, const Derivation& d) {
  if (d.steps.empty()) throw verify_error("derivation has no steps");
  check_size(ctx, d.param);
  std::map<std::string, QElem> seen;
  for (const DerivationStep& st : d.steps) {
    check_size(ctx, st.value);
    if (st.id.empty()) throw verify_error("derivation step without an id");
    if (seen.count(st.id))
      throw verify_error("duplicate derivation id '" + st.id + "'");
    QElem qv = ctx.to_q(st.value);
    if (st.base) {
      if (!st.left.empty() || !st.right.empty())
        throw verify_error("base step '" + st.id + "' must not reference ids");
    } else {
      auto l = seen.find(st.left);
      auto r = seen.find(st.right);
      if (l == seen.end() || r == seen.end())
        throw verify_error("step '" + st.id +
                           "' references an id that is not defined yet");
      QElem expect = star_q(ctx, d.param, l->second, r->second);
      if (expect != qv)
        throw verify_error("step '" + st.id + "' does not replay");
    }
    seen.emplace(st.id, std::move(qv));
  }
  std::string tid = d.target.empty() ? d.steps.back().id : d.target;
  auto t = seen.find(tid);
  if (t == seen.end())
    throw verify_error("derivation target '" + tid + "' is not a step");
  for (const DerivationStep& st : d.steps)
    if (st.id == tid) return st.value;
  throw internal_error("derivation target lookup failed");
}

// --- region saturation ----------------------------------------------------------------

SaturationResult saturate_region(const NumberFieldContext& ctx,
                                 const std::vector<Elem>& seed,
                                 const std::optional<Window>& window,
                                 const Rat& radius,
                                 const SearchBudget& budget) {
  if (seed.empty()) throw usage_error("saturation needs a nonempty seed set");
  if (radius < 0) throw usage_error("saturation radius must be nonnegative");
  for (const Elem& e : seed) check_size(ctx, e);
  if (window && window->bounds.size() != ctx.real_unit_interval_indices().size())
    throw usage_error("window does not match this context");
  // A strong PV parameter keeps every non-designated conjugate weight in
  // (0,1), so in-ball iteration terminates; anything weaker may not.
  {
    QElem lam = ctx.to_q(ctx.lambda());
    double re = ctx.approx_at(lam, ctx.lambda_index(), false);
    double im = ctx.approx_at(lam, ctx.lambda_index(), true);
    spv::Classification cls =
        spv::classify(ctx.minpoly(), std::make_pair(re, im));
    if (cls.verdict == spv::Verdict::not_spv)
      throw usage_error("saturation requires a strong PV parameter");
  }

  struct Node {
    Elem v;
    int l = -1, r = -1;  // node indices; l = -1 marks a seed
    int depth = 0;
  };
  std::vector<Node> nodes;
  std::map<Elem, int> index;
  std::deque<int> work;
  bool truncated = false;

  for (const Elem& s : seed) {
    if (index.count(s)) continue;
    index.emplace(s, static_cast<int>(nodes.size()));
    work.push_back(static_cast<int>(nodes.size()));
    nodes.push_back({s, -1, -1, 0});
  }

  Elem param = ctx.lambda();
  bool stop = false;
  while (!work.empty() && !stop) {
    int i = work.front();
    work.pop_front();
    std::size_t snapshot = nodes.size();
    for (std::size_t j = 0; j < snapshot && !stop; ++j) {
      if (static_cast<int>(j) == i) continue;
      for (int order = 0; order < 2 && !stop; ++order) {
        int x = order == 0 ? i : static_cast<int>(j);
        int y = order == 0 ? static_cast<int>(j) : i;
        Elem v = star(ctx, param, nodes[x].v, nodes[y].v);
        if (index.count(v)) continue;
        if (ctx.cmp_abs_lambda(v, radius) > 0) continue;
        if (window && !window_contains(ctx, *window, v)) continue;
        int depth = std::max(nodes[x].depth, nodes[y].depth) + 1;
        if (depth > budget.max_depth) {
          truncated = true;
          continue;
        }
        if (nodes.size() >= budget.max_points) {
          truncated = true;
          stop = true;
          continue;
        }
        int id = static_cast<int>(nodes.size());
        index.emplace(v, id);
        work.push_back(id);
        nodes.push_back({std::move(v), x, y, depth});
      }
    }
  }

  SaturationResult out;
  out.points.elements.reserve(nodes.size());
  for (const auto& kv : index) out.points.elements.push_back(kv.first);
  int max_depth_seen = 0;
  for (const Node& nd : nodes) max_depth_seen = std::max(max_depth_seen, nd.depth);
  out.points.rank_reached = max_depth_seen;
  out.points.saturated = !truncated;

  out.chain.param = ctx.to_q(param);
  std::vector<std::string> ids(nodes.size());
  int stars = 0, bases = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    DerivationStep st;
    if (nodes[k].l < 0) {
      st.id = "s" + std::to_string(bases++);
      st.base = true;
    } else {
      st.id = "p" + std::to_string(++stars);
      st.left = ids[nodes[k].l];
      st.right = ids[nodes[k].r];
    }
    ids[k] = st.id;
    st.value = nodes[k].v;
    out.chain.steps.push_back(std::move(st));
  }
  out.chain.target = ids.back();
  return out;
}

// --- derivation search -------------------------------------------------------------------

namespace {

constexpr std::uint32_t kSeedMark = 0xffffffffu;

struct Cand {
  double prio;
  std::uint32_t lhs, rhs;
  std::int32_t depth;
};

// Min-heap order: smallest |value| first, parent indices break ties.
struct CandAfter {
  bool operator()(const Cand& a, const Cand& b) const {
    if (a.prio != b.prio) return a.prio > b.prio;
    if (a.lhs != b.lhs) return a.lhs > b.lhs;
    return a.rhs > b.rhs;
  }
};

}  // namespace

std::optional<Derivation> derivation_search(const NumberFieldContext& ctx,
                                            const Elem& target,
                                            const std::vector<Elem>& seed,
                                            const SearchBudget& budget,
                                            SearchStats* stats) {
  return derivation_search_with(ctx, ctx.lambda(), target, seed, budget,
                                stats);
}

std::optional<Derivation> derivation_search_with(
    const NumberFieldContext& ctx, const Elem& param, const Elem& target,
    const std::vector<Elem>& seed, const SearchBudget& budget,
    SearchStats* stats) {
  if (seed.empty()) throw usage_error("search needs a nonempty seed set");
  check_size(ctx, param);
  check_size(ctx, target);
  for (const Elem& e : seed) check_size(ctx, e);
  if (stats) *stats = SearchStats{};

  const double max_abs = rat_to_double(budget.max_abs);
  const std::size_t queue_cap =
      std::max<std::size_t>(1 << 16, 4 * budget.max_points);

  std::vector<Cand> heap;
  auto push = [&](Cand c) {
    if (c.prio > max_abs) return;
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end(), CandAfter{});
    if (heap.size() > queue_cap) {
      std::sort(heap.begin(), heap.end(), [](const Cand& a, const Cand& b) {
        return CandAfter{}(b, a);
      });
      heap.resize(queue_cap / 2);
      std::make_heap(heap.begin(), heap.end(), CandAfter{});
    }
  };

  std::vector<Elem> vals;
  std::vector<std::array<std::int32_t, 2>> par;
  std::vector<std::int32_t> dep;
  std::map<Elem, int> index;

  for (std::size_t i = 0; i < seed.size(); ++i)
    push({approx_abs(ctx, seed[i]), kSeedMark, static_cast<std::uint32_t>(i),
          0});

  auto reconstruct = [&](int tid) {
    std::vector<char> used(vals.size(), 0);
    std::vector<int> stack = {tid};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      if (used[i]) continue;
      used[i] = 1;
      if (par[i][0] >= 0) {
        stack.push_back(par[i][0]);
        stack.push_back(par[i][1]);
      }
    }
    Derivation d;
    d.param = ctx.to_q(param);
    std::vector<std::string> ids(vals.size());
    int stars = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (!used[i]) continue;
      DerivationStep st;
      if (par[i][0] < 0) {
        st.id = "s" + std::to_string(par[i][1]);
        st.base = true;
      } else {
        st.id = "p" + std::to_string(++stars);
        st.left = ids[par[i][0]];
        st.right = ids[par[i][1]];
      }
      ids[i] = st.id;
      st.value = vals[i];
      d.steps.push_back(std::move(st));
    }
    d.target = ids[tid];
    return d;
  };

  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), CandAfter{});
    Cand c = heap.back();
    heap.pop_back();

    Elem v = c.lhs == kSeedMark ? seed[c.rhs]
                                : star(ctx, param, vals[c.lhs], vals[c.rhs]);
    if (index.count(v)) continue;
    if (vals.size() >= budget.max_points) {
      if (stats) stats->settled = vals.size();
      return std::nullopt;  // budget tripped
    }

    int id = static_cast<int>(vals.size());
    index.emplace(v, id);
    vals.push_back(v);
    par.push_back({c.lhs == kSeedMark ? -1 : static_cast<std::int32_t>(c.lhs),
                   static_cast<std::int32_t>(c.rhs)});
    dep.push_back(c.depth);

    if (v == target) {
      if (stats) {
        stats->settled = vals.size();
        stats->depth = c.depth;
      }
      return reconstruct(id);
    }

    for (int j = 0; j < id; ++j) {
      std::int32_t d = std::max(dep[j], dep[id]) + 1;
      if (d > budget.max_depth) continue;
      Elem f = star(ctx, param, vals[j], vals[id]);
      push({approx_abs(ctx, f), static_cast<std::uint32_t>(j),
            static_cast<std::uint32_t>(id), d});
      Elem g = star(ctx, param, vals[id], vals[j]);
      push({approx_abs(ctx, g), static_cast<std::uint32_t>(id),
            static_cast<std::uint32_t>(j), d});
    }
  }

  if (stats) {
    stats->settled = vals.size();
    stats->exhausted = true;
  }
  return std::nullopt;
}

// --- convexity witness ---------------------------------------------------------------------

namespace {

// 0 < |a-b| < 1, decided exactly.
bool witness_pair(const NumberFieldContext& ctx, const Elem& a,
                  const Elem& b) {
  Elem d = ctx.sub(a, b);
  bool zero = true;
  for (const Int& c : d) zero = zero && c == 0;
  if (zero) return false;
  return ctx.cmp_abs_lambda(d, Rat(1)) < 0;
}

}  // namespace

ConvexityVerdict convexity_witness(const NumberFieldContext& ctx,
                                   const SearchBudget& budget) {
  Elem lam = ctx.lambda();
  Elem zero = ctx.zero();
  Elem one = ctx.one();
  if (lam == zero || lam == one)
    throw usage_error("convexity probe needs a parameter other than 0 and 1");

  ConvexityVerdict v;
  // Immediate region: 0 < |lambda| < 1.
  if (ctx.cmp_abs_lambda(lam, Rat(1)) < 0) {
    v.kind = ConvexityVerdict::Kind::convex;
    v.shape = closure_shape(ctx);
    v.witness = {lam, zero};
    return v;
  }

  // Fast candidate pairs.
  Elem beta = ctx.mul(ctx.sub(lam, one), ctx.sub(lam, one));
  Elem mu = star(ctx, one, lam);  // 1 + lambda*(lambda - 1)
  const std::pair<Elem, Elem> cands[] = {
      {lam, beta},          {mu, zero}, {mu, one},
      {mu, lam},            {ctx.mul(lam, lam), lam},
      {ctx.sub(one, lam), zero}};
  for (const auto& [a, b] : cands) {
    if (witness_pair(ctx, a, b)) {
      v.kind = ConvexityVerdict::Kind::witness_found;
      v.shape = closure_shape(ctx);
      v.witness = {a, b};
      return v;
    }
  }

  // Rank sweep: expand levels, check each new point against everything by
  // exact distance, with a numeric prefilter.
  std::set<Elem> cur = {zero, one};
  bool is_real = ctx.lambda_is_real();
  int li = ctx.lambda_index();

  auto approx_val = [&](const Elem& e) {
    QElem q = ctx.to_q(e);
    return std::pair<double, double>(
        ctx.approx_at(q, li, false),
        is_real ? 0.0 : ctx.approx_at(q, li, true));
  };

  std::vector<std::pair<Elem, std::pair<double, double>>> pts;
  for (const Elem& e : cur) pts.emplace_back(e, approx_val(e));

  for (int level = 1; level <= budget.max_depth; ++level) {
    std::vector<Elem> base(cur.begin(), cur.end());
    std::set<Elem> next = cur;
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = 0; j < base.size(); ++j) {
        if (i == j) continue;
        next.insert(star(ctx, base[i], base[j]));
      }
    if (next.size() > budget.max_points) break;  // out of budget: unknown
    if (next.size() == cur.size()) break;        // fixed point: no more points

    std::vector<Elem> grown;
    for (const Elem& e : next)
      if (!cur.count(e)) grown.push_back(e);
    for (const Elem& g : grown) {
      auto ga = approx_val(g);
      for (const auto& [p, pa] : pts) {
        double dx = ga.first - pa.first, dy = ga.second - pa.second;
        if (std::hypot(dx, dy) > 1.0 + 1e-6) continue;
        if (witness_pair(ctx, g, p)) {
          v.kind = ConvexityVerdict::Kind::witness_found;
          v.shape = closure_shape(ctx);
          v.witness = {g, p};
          return v;
        }
      }
      pts.emplace_back(g, ga);
    }
    cur.swap(next);
  }

  v.kind = ConvexityVerdict::Kind::unknown_at_budget;
  return v;
}

ConvexityVerdict convexity_witness_rational(const Rat& lambda,
                                            const SearchBudget& budget) {
  if (lambda == 0 || lambda == 1)
    throw usage_error("convexity probe needs a parameter other than 0 and 1");

  ConvexityVerdict v;
  auto in_unit = [](const Rat& x) {
    Rat a = x < 0 ? Rat(-x) : x;
    return a > 0 && a < 1;
  };

  if (in_unit(lambda)) {
    v.kind = ConvexityVerdict::Kind::convex;
    v.shape = closure_shape_rational(lambda);
    v.witness_rational = {lambda, Rat(0)};
    return v;
  }

  Rat beta = (lambda - 1) * (lambda - 1);
  Rat mu = lambda * lambda - lambda + 1;
  const std::pair<Rat, Rat> cands[] = {{lambda, beta}, {mu, Rat(0)},
                                       {mu, Rat(1)},   {mu, lambda},
                                       {lambda * lambda, lambda},
                                       {Rat(1) - lambda, Rat(0)}};
  for (const auto& [a, b] : cands) {
    if (in_unit(a - b)) {
      v.kind = ConvexityVerdict::Kind::witness_found;
      v.shape = closure_shape_rational(lambda);
      v.witness_rational = {a, b};
      return v;
    }
  }

  std::set<Rat> cur = {Rat(0), Rat(1)};
  for (int level = 1; level <= budget.max_depth; ++level) {
    std::vector<Rat> base(cur.begin(), cur.end());
    std::set<Rat> next = cur;
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = 0; j < base.size(); ++j) {
        if (i == j) continue;
        next.insert(star_rational(lambda, base[i], base[j]));
      }
    if (next.size() > budget.max_points) break;
    if (next.size() == cur.size()) break;
    // Values are exact rationals on a line: adjacent gaps witness density.
    Rat prev;
    bool first = true;
    for (const Rat& x : next) {
      if (!first && in_unit(x - prev)) {
        v.kind = ConvexityVerdict::Kind::witness_found;
        v.shape = closure_shape_rational(lambda);
        v.witness_rational = {x, prev};
        return v;
      }
      prev = x;
      first = false;
    }
    cur.swap(next);
  }

  v.kind = ConvexityVerdict::Kind::unknown_at_budget;
  return v;
}

}  // namespace fpx::starset
