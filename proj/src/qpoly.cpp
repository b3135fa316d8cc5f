#include "fpx/qpoly.hpp"

#include <algorithm>
#include <utility>

#include "fpx/error.hpp"

namespace fpx::qpoly {

using algebra::distinct_real_roots_in;
using algebra::log_interval;
using algebra::RationalInterval;
using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

namespace {

Int floor_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);
  Int q = n / d;  // truncates toward zero
  if (q * d != n && n < 0) --q;
  return q;
}

Int ceil_rat(const Rat& r) { return -floor_rat(-r); }

// x^k (1 - x)^(n-k) in standard form.
IntPolynomial basis_poly(int n, int k) {
  std::vector<Int> c(static_cast<std::size_t>(n) + 1, Int(0));
  for (int j = 0; j <= n - k; ++j) {
    Int term = binomial(n - k, j);
    c[static_cast<std::size_t>(k + j)] = (j % 2 == 0) ? term : Int(-term);
  }
  return IntPolynomial(std::move(c));
}

// Primitive integer image of a rational-coefficient polynomial: denominators
// cleared, content divided out, leading coefficient positive.
IntPolynomial primitive(const std::vector<Rat>& v) {
  std::size_t len = v.size();
  while (len > 0 && v[len - 1] == 0) --len;
  if (len == 0) return IntPolynomial::zero();
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

std::vector<Rat> to_qvec(const IntPolynomial& p) {
  std::vector<Rat> v(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i) v[i] = Rat(p.c[i]);
  return v;
}

// Remainder of a by b over the rationals; b nonzero.
std::vector<Rat> qrem(std::vector<Rat> a, const std::vector<Rat>& b) {
  auto deg = [](const std::vector<Rat>& v) {
    std::size_t len = v.size();
    while (len > 0 && v[len - 1] == 0) --len;
    return static_cast<int>(len) - 1;
  };
  int db = deg(b);
  if (db <= 0) {  // nonzero constant divides everything
    a.clear();
    return a;
  }
  for (int da = deg(a); da >= db; da = deg(a)) {
    Rat q = a[static_cast<std::size_t>(da)] / b[static_cast<std::size_t>(db)];
    for (int i = 0; i < db; ++i)
      a[static_cast<std::size_t>(da - db + i)] -= q * b[static_cast<std::size_t>(i)];
    a.resize(static_cast<std::size_t>(da));
  }
  return a;
}

// Primitive gcd of two integer polynomials (Euclid over Q).
IntPolynomial poly_gcd(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Rat> u = to_qvec(a), v = to_qvec(b);
  auto is_zero = [](const std::vector<Rat>& w) {
    for (const auto& x : w)
      if (x != 0) return false;
    return true;
  };
  while (!is_zero(v)) {
    std::vector<Rat> r = qrem(u, v);
    u = std::move(v);
    v = std::move(r);
  }
  return primitive(u);
}

// Divides out one factor x - m; p(m) must be zero.
IntPolynomial deflate_root(const IntPolynomial& p, const Rat& m) {
  int d = p.degree();
  std::vector<Rat> q(static_cast<std::size_t>(d), Rat(0));
  Rat carry = Rat(p.c[static_cast<std::size_t>(d)]);
  for (int i = d - 1; i >= 0; --i) {
    q[static_cast<std::size_t>(i)] = carry;
    carry = Rat(p.c[static_cast<std::size_t>(i)]) + m * carry;
  }
  if (carry != 0) throw internal_error("deflation of a non-root");
  return primitive(q);
}

// Removes roots at 0 and 1, keeping interior roots and multiplicities.
IntPolynomial strip_unit_endpoints(IntPolynomial g) {
  while (!g.is_zero() && g.c.front() == 0) g.c.erase(g.c.begin());
  IntPolynomial x_minus_1(std::vector<Int>{Int(-1), Int(1)});
  while (!g.is_zero() && g.eval_int(1) == 0) g = algebra::divmod_monic(g, x_minus_1).first;
  return g;
}

int roots_in(const IntPolynomial& p, const Rat& a, const Rat& b) {
  if (p.degree() < 1) return 0;
  return distinct_real_roots_in(p, a, b);
}

// Critical points of f inside (0, 1): exact rational ones, plus isolating
// intervals holding exactly one root of g each, with g nonvanishing at all
// interval endpoints.  g is the derivative with endpoint roots stripped and
// any rational roots hit during bisection deflated out.
struct CriticalPoints {
  std::vector<Rat> rational;
  std::vector<std::pair<Rat, Rat>> intervals;
  IntPolynomial g;
};

CriticalPoints isolate_critical(const IntPolynomial& derivative) {
  CriticalPoints out;
  out.g = strip_unit_endpoints(derivative);
  if (out.g.degree() < 1) return out;
  struct Span {
    Rat a, b;
    int count;
  };
  std::vector<Span> work;
  work.push_back({Rat(0), Rat(1), roots_in(out.g, Rat(0), Rat(1))});
  int steps = 0;
  while (!work.empty()) {
    if (++steps > 20000) throw internal_error("critical point isolation stalled");
    Span s = work.back();
    work.pop_back();
    if (s.count == 0) continue;
    if (s.count == 1) {
      out.intervals.push_back({s.a, s.b});
      continue;
    }
    Rat m = (s.a + s.b) / 2;
    if (out.g.eval(m) == 0) {
      out.rational.push_back(m);
      do out.g = deflate_root(out.g, m);
      while (!out.g.is_zero() && out.g.eval(m) == 0);
      // counts on both sides change with g; recompute from scratch
      work.push_back({s.a, m, roots_in(out.g, s.a, m)});
      work.push_back({m, s.b, roots_in(out.g, m, s.b)});
      continue;
    }
    int left = roots_in(out.g, s.a, m);
    work.push_back({s.a, m, left});
    work.push_back({m, s.b, s.count - left});
  }
  return out;
}

// Least level whose basis coordinates all land in [0, C(n,k)], with the
// coordinates as certificate.  Exists for every true member.
std::pair<int, std::vector<Int>> lift_witness(const IntPolynomial& f) {
  int d = std::max(f.degree(), 0);
  for (int n = d; n <= 4096; ++n) {
    std::vector<Int> fk(static_cast<std::size_t>(n) + 1, Int(0));
    bool ok = true;
    for (int k = 0; k <= n && ok; ++k) {
      Int v = 0;
      for (int j = 0; j < static_cast<int>(f.c.size()) && j <= k; ++j)
        v += f.c[static_cast<std::size_t>(j)] * binomial(n - j, k - j);
      if (v < 0 || v > binomial(n, k)) ok = false;
      fk[static_cast<std::size_t>(k)] = std::move(v);
    }
    if (ok) return {n, std::move(fk)};
  }
  throw internal_error("witness level exceeded the lifting cap");
}

// Flags a value outside the open unit interval as a non-member witness.
bool violation_at(const IntPolynomial& f, const Rat& point, MembershipVerdict& out) {
  Rat v = f.eval(point);
  if (v > 0 && v < 1) return false;
  out.member = false;
  out.witness_point = point;
  out.witness_value = v;
  return true;
}

// Decides the interval's single critical point r (a root of g): returns
// false with the verdict filled when 0 < f(r) < 1 fails.
bool resolve_interval(const IntPolynomial& f, const IntPolynomial& h,
                      const IntPolynomial& g, Rat a, Rat b, MembershipVerdict& out) {
  // The midpoint is the canonical probe: when the critical point sits there
  // exactly (the usual place for a rational one), the interval is decided by
  // a single evaluation and the witness lands on the derivative's root.
  {
    Rat m = (a + b) / 2;
    if (g.eval(m) == 0) return !violation_at(f, m, out);
  }
  // Shrink until f sits strictly inside (0, 1) at both endpoints.  The global
  // endpoints 0 and 1 carry f-values in {0, 1} legitimately, so they are
  // shaved off rather than flagged; any interior endpoint outside the open
  // interval is a witness outright.  Quarter steps from the offending side
  // converge past r, which g separates from 0 and 1.
  auto inside = [](const Rat& v) { return v > 0 && v < 1; };
  for (int step = 0;; ++step) {
    if (step > 512) throw internal_error("endpoint cleaning at a critical point stalled");
    bool a_bad = !inside(f.eval(a));
    bool b_bad = !inside(f.eval(b));
    if (a_bad && a != 0 && a != 1) return !violation_at(f, a, out);
    if (b_bad && b != 0 && b != 1) return !violation_at(f, b, out);
    if (!a_bad && !b_bad) break;
    Rat c = a_bad ? Rat(a + (b - a) / 4) : Rat(b - (b - a) / 4);
    if (g.eval(c) == 0) return !violation_at(f, c, out);  // r = c decides the interval
    if (violation_at(f, c, out)) return false;
    if (roots_in(g, a, c) == 0)
      a = c;
    else
      b = c;
  }
  // Tangency screen: f (or f - 1) shares the root r with g exactly when the
  // gcd has a root in the isolating interval.
  for (int at_one = 0; at_one <= 1; ++at_one) {
    const IntPolynomial& target = at_one ? h : f;
    IntPolynomial shared = poly_gcd(target, g);
    if (shared.degree() < 1 || roots_in(shared, a, b) == 0) continue;
    // The extremum value is exactly 0 (or 1).  A one-sided crossing still
    // yields a rational witness; a pure tangency has none, so report the
    // isolating interval after a bounded refinement.
    for (int step = 0; step < 64; ++step) {
      Rat m = (a + b) / 2;
      if (g.eval(m) == 0) break;  // r itself is rational: f(r) in {0,1} caught below
      if (violation_at(f, m, out)) return false;
      if (roots_in(g, a, m) == 1)
        b = m;
      else
        a = m;
    }
    Rat m = (a + b) / 2;
    if (g.eval(m) == 0 && violation_at(f, m, out)) return false;
    out.member = false;
    out.root_interval = {a, b};
    out.touches_one = (at_one == 1);
    return false;
  }
  // f(r) is neither 0 nor 1: shrink until no root of f or f - 1 remains,
  // then the sign over the whole interval is the sign at an endpoint.
  for (int step = 0; step < 512; ++step) {
    if (roots_in(f, a, b) == 0 && roots_in(h, a, b) == 0) return true;
    Rat m = (a + b) / 2;
    if (g.eval(m) == 0) return !violation_at(f, m, out);  // r = m, rational after all
    if (violation_at(f, m, out)) return false;
    if (roots_in(g, a, m) == 1)
      b = m;
    else
      a = m;
  }
  throw internal_error("sign refinement at a critical point stalled");
}

}  // namespace

Int binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

IntPolynomial star_x(const IntPolynomial& s, const IntPolynomial& t) {
  std::size_t n = std::max(s.c.size(), t.c.size()) + 1;
  std::vector<Int> c(n, Int(0));
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    c[i] += s.c[i];
    c[i + 1] -= s.c[i];
  }
  for (std::size_t i = 0; i < t.c.size(); ++i) c[i + 1] += t.c[i];
  return IntPolynomial(std::move(c));
}

StarBasis to_star_basis(const IntPolynomial& f, int n) {
  if (n < 0 || n < f.degree())
    throw usage_error("basis level must be at least the polynomial degree");
  StarBasis out;
  out.n = n;
  out.coeffs.assign(static_cast<std::size_t>(n) + 1, Rat(0));
  for (int k = 0; k <= n; ++k) {
    Int v = 0;
    for (int j = 0; j < static_cast<int>(f.c.size()) && j <= k; ++j)
      v += f.c[static_cast<std::size_t>(j)] * binomial(n - j, k - j);
    out.coeffs[static_cast<std::size_t>(k)] = Rat(std::move(v));
  }
  return out;
}

IntPolynomial from_star_basis(const StarBasis& b) {
  if (b.n < 0 || b.coeffs.size() != static_cast<std::size_t>(b.n) + 1)
    throw usage_error("basis coordinates must have length n + 1");
  std::vector<Int> c(static_cast<std::size_t>(b.n) + 1, Int(0));
  for (int k = 0; k <= b.n; ++k) {
    const Rat& bk = b.coeffs[static_cast<std::size_t>(k)];
    if (denominator(bk) != 1)
      throw usage_error("basis coordinates must be integral to expand over the integers");
    Int w = numerator(bk);
    if (w == 0) continue;
    for (int j = 0; j <= b.n - k; ++j) {
      Int term = w * binomial(b.n - k, j);
      c[static_cast<std::size_t>(k + j)] += (j % 2 == 0) ? term : Int(-term);
    }
  }
  return IntPolynomial(std::move(c));
}

MembershipVerdict membership(const IntPolynomial& f) {
  MembershipVerdict out;
  if (f.is_zero() || f == IntPolynomial::constant(1)) {
    out.member = true;
    out.witness_level = 0;
    out.level_coeffs = {f.is_zero() ? Int(0) : Int(1)};
    return out;
  }
  Int v0 = f.constant_term();
  Int v1 = f.eval_int(1);
  if (v0 != 0 && v0 != 1) {
    out.witness_point = Rat(0);
    out.witness_value = Rat(v0);
    return out;
  }
  if (v1 != 0 && v1 != 1) {
    out.witness_point = Rat(1);
    out.witness_value = Rat(v1);
    return out;
  }
  // Range check on (0, 1) via the critical points.  With both endpoint
  // values in {0, 1}, the range can only escape through an interior
  // extremum, and a nonconstant polynomial with equal endpoint values has
  // one; so checking every critical point decides 0 < f < 1 exactly.
  CriticalPoints crit = isolate_critical(f.derivative());
  for (const Rat& m : crit.rational)
    if (violation_at(f, m, out)) return out;
  IntPolynomial h = f - IntPolynomial::constant(1);
  for (const auto& [a, b] : crit.intervals)
    if (!resolve_interval(f, h, crit.g, a, b, out)) return out;
  auto [level, coeffs] = lift_witness(f);
  out.member = true;
  out.witness_level = level;
  out.level_coeffs = std::move(coeffs);
  return out;
}

Int level_count(int n) {
  if (n < 0) throw usage_error("level must be nonnegative");
  Int c = 1;
  for (int k = 0; k <= n; ++k) c *= 1 + binomial(n, k);
  return c;
}

std::vector<IntPolynomial> enumerate_level(int n, std::size_t limit) {
  Int count = level_count(n);
  if (count > Int(limit))
    throw budget_error("level " + std::to_string(n) + " has " + count.str() +
                       " members, over the enumeration limit");
  std::size_t width = static_cast<std::size_t>(n) + 1;
  std::vector<Int> bound(width);
  std::vector<std::vector<Int>> basis(width);
  for (int k = 0; k <= n; ++k) {
    bound[static_cast<std::size_t>(k)] = binomial(n, k);
    basis[static_cast<std::size_t>(k)] = basis_poly(n, k).c;
    basis[static_cast<std::size_t>(k)].resize(width, Int(0));
  }
  std::vector<IntPolynomial> out;
  out.reserve(count.convert_to<std::size_t>());
  std::vector<Int> b(width, Int(0));
  for (;;) {
    std::vector<Int> c(width, Int(0));
    for (std::size_t k = 0; k < width; ++k) {
      if (b[k] == 0) continue;
      for (std::size_t i = k; i < width; ++i) c[i] += b[k] * basis[k][i];
    }
    out.push_back(IntPolynomial(std::move(c)));
    std::size_t pos = 0;
    while (pos < width && b[pos] == bound[pos]) b[pos++] = 0;
    if (pos == width) break;
    ++b[pos];
  }
  std::sort(out.begin(), out.end(),
            [](const IntPolynomial& x, const IntPolynomial& y) { return x.c < y.c; });
  return out;
}

int threshold_level(const Rat& eps) {
  if (eps <= 0 || eps >= 1) throw usage_error("threshold accuracy must lie in (0, 1)");
  Rat scale = 2 * eps * eps;
  Rat tol(1, 1000000);
  for (int round = 0; round < 60; ++round) {
    RationalInterval lg = log_interval(eps, tol);
    Int lo = ceil_rat(-lg.hi / scale);
    Int hi = ceil_rat(-lg.lo / scale);
    if (lo == hi) {
      if (lo > 1000000000) throw budget_error("threshold level overflows the budget");
      return static_cast<int>(lo.convert_to<long long>());
    }
    tol /= 1024;
  }
  throw internal_error("threshold level failed to settle");
}

IntPolynomial threshold_poly(const Rat& gamma, const Rat& eps) {
  if (gamma <= 0 || gamma >= 1) throw usage_error("threshold location must lie in (0, 1)");
  int n = threshold_level(eps);
  if (n > 10000)
    throw budget_error("threshold level " + std::to_string(n) + " is over the degree budget");
  Int m = floor_rat(gamma * n);
  StarBasis basis;
  basis.n = n;
  basis.coeffs.assign(static_cast<std::size_t>(n) + 1, Rat(0));
  for (int i = 0; Int(i) <= m; ++i) basis.coeffs[static_cast<std::size_t>(i)] = Rat(binomial(n, i));
  return from_star_basis(basis);
}

std::vector<IntPolynomial> census(int max_degree, const Int& coeff_bound, std::size_t limit) {
  if (max_degree < 0) throw usage_error("census degree must be nonnegative");
  if (coeff_bound < 0) throw usage_error("census coefficient bound must be nonnegative");
  Int grid = 1;
  for (int i = 0; i <= max_degree; ++i) grid *= 2 * coeff_bound + 1;
  if (grid > Int(limit))
    throw budget_error("census grid has " + grid.str() + " candidates, over the limit");
  std::size_t width = static_cast<std::size_t>(max_degree) + 1;
  std::vector<Int> a(width, Int(-coeff_bound));
  std::vector<IntPolynomial> out;
  for (;;) {
    IntPolynomial f{std::vector<Int>(a)};
    if (membership(f).member) out.push_back(std::move(f));
    std::size_t pos = 0;
    while (pos < width && a[pos] == coeff_bound) a[pos++] = -coeff_bound;
    if (pos == width) break;
    ++a[pos];
  }
  std::sort(out.begin(), out.end(),
            [](const IntPolynomial& x, const IntPolynomial& y) { return x.c < y.c; });
  return out;
}

}  // namespace fpx::qpoly
