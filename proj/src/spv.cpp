#include "fpx/spv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace fpx::spv {

using algebra::Elem;
using algebra::IntPolynomial;
using algebra::NumberFieldContext;
using algebra::QElem;

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::spv_trivial: return "sPV-trivial";
    case Verdict::spv_nontrivial: return "sPV-nontrivial";
    case Verdict::not_spv: return "not-sPV";
  }
  return "not-sPV";
}

namespace {

Int poly_content(const IntPolynomial& p) {
  Int g = 0;
  for (const Int& c : p.c) g = boost::multiprecision::gcd(g, c < 0 ? Int(-c) : c);
  return g == 0 ? Int(1) : g;
}

IntPolynomial primitive_part(const IntPolynomial& p) {
  Int g = poly_content(p);
  IntPolynomial r = p;
  for (Int& c : r.c) c /= g;
  if (!r.c.empty() && r.c.back() < 0)
    for (Int& c : r.c) c = -c;
  return r;
}

Classification classify_context(const NumberFieldContext& ctx) {
  Classification out;
  out.minpoly = ctx.minpoly();
  out.integral = true;
  out.ctx = ctx;
  int li = ctx.lambda_index();
  int lc = ctx.conjugate_index(li);
  out.lambda_re = ctx.approx_at(ctx.to_q(ctx.lambda()), li, false);
  out.lambda_im = ctx.approx_at(ctx.to_q(ctx.lambda()), li, true);
  std::vector<int> win = ctx.real_unit_interval_indices();
  std::set<int> wset(win.begin(), win.end());
  bool ok = true;
  for (int i = 0; i < ctx.root_count(); ++i) {
    if (i == li || i == lc) continue;
    if (!wset.count(i)) {
      ok = false;
      continue;
    }
    ++out.k;
    out.window_values.push_back(ctx.approx_at(ctx.to_q(ctx.lambda()), i, false));
  }
  std::sort(out.window_values.begin(), out.window_values.end());
  if (!ok) {
    out.verdict = Verdict::not_spv;
    out.k = 0;
    out.window_values.clear();
  } else {
    out.verdict = out.k == 0 ? Verdict::spv_trivial : Verdict::spv_nontrivial;
  }
  return out;
}

}  // namespace

Classification classify(const IntPolynomial& p_in, std::optional<std::pair<double, double>> hint) {
  IntPolynomial p = primitive_part(p_in);
  if (p.degree() < 1) throw usage_error("classification requires a nonconstant polynomial");
  if (!p.is_monic()) {
    Classification out;
    out.minpoly = p;
    out.integral = false;
    out.verdict = Verdict::not_spv;
    return out;
  }
  return classify_context(NumberFieldContext::make(p, hint));
}

Classification classify_rational(const Rat& value) {
  Int num = boost::multiprecision::numerator(value);
  Int den = boost::multiprecision::denominator(value);
  Classification out;
  if (den == 1) {
    IntPolynomial p;
    p.c = {Int(-num), Int(1)};
    return classify(p);
  }
  IntPolynomial p;
  p.c = {Int(-num), den};
  out.minpoly = primitive_part(p);
  out.integral = false;
  out.verdict = Verdict::not_spv;
  out.lambda_re = rat_to_double(value);
  return out;
}

QuadraticFamilyEntry quadratic_family(const Int& m, const Int& n) {
  if (n <= 0 || n > m) throw usage_error("quadratic family requires 0 < n <= m");
  IntPolynomial p;
  p.c = {Int(-n), m, Int(1)};
  QuadraticFamilyEntry entry;
  entry.m = m;
  entry.n = n;
  double disc = std::sqrt(rat_to_double(Rat(m * m + 4 * n)));
  double neg_root = (-rat_to_double(Rat(m)) - disc) / 2;
  entry.cls = classify(p, {{neg_root, 0.0}});
  entry.lambda_value = entry.cls.lambda_re;
  if (entry.cls.verdict != Verdict::spv_nontrivial)
    throw internal_error("quadratic family member failed its windowed-conjugate check");
  return entry;
}

CubicCriterion cubic_criterion(const Int& a, const Int& b, const Int& c) {
  CubicCriterion out;
  out.discriminant = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
  Int sum = a + b + c;
  if (c < 0 && sum >= 0 && out.discriminant < 0) out.nonreal_mode = true;
  if (c > 0 && sum >= 0 && b < 0 && b > -2 * a - 3 && out.discriminant > 0) out.real_least_mode = true;
  if (!out.nonreal_mode && !out.real_least_mode) return out;
  IntPolynomial p;
  p.c = {c, b, a, Int(1)};
  // Reducible cubics can pass the sign pattern; they carry no classification.
  try {
    std::optional<std::pair<double, double>> hint;
    if (out.real_least_mode) {
      // Designate the least real root.
      auto probe = NumberFieldContext::make(p);
      auto reals = probe.real_root_indices();
      if (reals.size() != 3) throw internal_error("real-least mode expected three real roots");
      double least = probe.approx_at(probe.to_q(probe.lambda()), reals.front());
      hint = {{least, 0.0}};
    }
    out.cls = classify(p, hint);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::usage) throw;
  }
  return out;
}

// ---------------------------------------------------------------------------
// lambda_n machinery
// ---------------------------------------------------------------------------

namespace {

// For palindromic P of even degree 2k, find psi with P(z) = z^k psi(z + 1/z).
IntPolynomial half_trace_poly(const IntPolynomial& phi) {
  int deg = phi.degree();
  if (deg < 2 || deg % 2 != 0) throw internal_error("half-trace extraction needs even degree");
  int k = deg / 2;
  IntPolynomial P = phi;
  IntPolynomial z2p1 = IntPolynomial::parse("x^2+1");
  std::vector<Int> b(k + 1, Int(0));
  for (int j = k; j >= 0; --j) {
    Int coef = (P.degree() >= k + j) ? P.c[k + j] : Int(0);
    b[j] = coef;
    if (coef == 0) continue;
    // Subtract coef * z^(k-j) * (z^2+1)^j.
    IntPolynomial term = IntPolynomial::constant(coef);
    for (int t = 0; t < j; ++t) term = term * z2p1;
    IntPolynomial shift;
    shift.c.assign(k - j + 1, Int(0));
    shift.c[k - j] = 1;
    P = P - term * shift;
  }
  if (!P.is_zero()) throw internal_error("polynomial is not palindromic");
  IntPolynomial psi;
  psi.c = std::move(b);
  psi.normalize();
  return psi;
}

// Primitive minimal polynomial of lambda_n (positive leading coefficient).
IntPolynomial lambda_n_minpoly(int n) {
  if (n == 1) return IntPolynomial::parse("4x-1");
  IntPolynomial phi = algebra::cyclotomic_polynomial(2 * n);
  IntPolynomial psi = half_trace_poly(phi);
  // Minimal polynomial of w = 2 - 2 cos(pi/n), made monic.
  IntPolynomial mw = compose(psi, IntPolynomial::parse("2-x"));
  if (mw.leading() < 0)
    for (Int& cc : mw.c) cc = -cc;
  IntPolynomial ml = algebra::reversed(mw);
  if (ml.leading() < 0)
    for (Int& cc : ml.c) cc = -cc;
  return ml;
}

}  // namespace

bool lambda_n_window_test(int n, std::vector<int>* violations) {
  if (n < 3 || n % 2 == 0) throw usage_error("residue-window test requires odd n >= 3");
  bool ok = true;
  for (int j = 1; j < n; ++j) {
    if (std::gcd(j, n) != 1) continue;
    if (3 * j < n || 3 * j > 2 * n) continue;
    if (2 * j == n - 1 || 2 * j == n + 1) continue;
    ok = false;
    if (violations) violations->push_back(j);
  }
  return ok;
}

std::vector<int> lambda_n_spv_sweep(int lo, int hi) {
  std::vector<int> out;
  for (int n = std::max(3, lo); n <= hi; ++n) {
    if (n % 2 == 0) continue;
    if (lambda_n_window_test(n)) out.push_back(n);
  }
  return out;
}

LambdaN lambda_n(int n) {
  if (n < 1) throw usage_error("lambda_n requires n >= 1");
  LambdaN out;
  out.n = n;
  out.value = 1.0 / (2.0 - 2.0 * std::cos(M_PI / static_cast<double>(n)));
  out.minpoly = lambda_n_minpoly(n);
  out.integral = out.minpoly.is_monic();
  if (!out.integral) {
    out.verdict = Verdict::not_spv;
    return out;
  }
  if (n >= 3 && n % 2 == 1) {
    out.used_window_lemma = true;
    bool ok = lambda_n_window_test(n, &out.violating_residues);
    if (ok) {
      int d = out.minpoly.degree();
      out.k = d - 1;
      out.verdict = out.k == 0 ? Verdict::spv_trivial : Verdict::spv_nontrivial;
    } else {
      out.verdict = Verdict::not_spv;
    }
    return out;
  }
  Classification cls = classify(out.minpoly, {{out.value, 0.0}});
  out.verdict = cls.verdict;
  out.k = cls.k;
  return out;
}

// ---------------------------------------------------------------------------
// Fundamental unit of a real quadratic order, Pell convention.
// ---------------------------------------------------------------------------

namespace {

// (x + y sqrt(d)) / 2 pairs with rational components.
struct HalfSurd {
  Rat x, y;
};

HalfSurd hs_mul(const HalfSurd& u, const HalfSurd& v, const Int& d) {
  return {(u.x * v.x + u.y * v.y * Rat(d)) / 2, (u.x * v.y + u.y * v.x) / 2};
}

// Fundamental +-1 Pell solution for nonsquare d via the surd expansion.
std::pair<Int, Int> pell_unit(const Int& d) {
  Int a0 = isqrt_floor(d);
  if (a0 * a0 == d) throw internal_error("Pell expansion of a perfect square");
  Int P = 0, Q = 1, a = a0;
  Int pm1 = a0, pm2 = 1, qm1 = 1, qm2 = 0;
  for (int guard = 0; guard < 1000000; ++guard) {
    P = a * Q - P;
    Q = (d - P * P) / Q;
    a = (a0 + P) / Q;
    if (Q == 1) return {pm1, qm1};
    Int p = a * pm1 + pm2, q = a * qm1 + qm2;
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  throw internal_error("Pell expansion failed to close a period");
}

}  // namespace

Elem fundamental_unit(const NumberFieldContext& ctx) {
  if (ctx.degree() != 2) throw usage_error("fundamental unit requires a quadratic field");
  Int B = ctx.minpoly().c[1], C = ctx.minpoly().c[0];
  Int D0 = B * B - 4 * C;
  if (D0 <= 0) throw usage_error("fundamental unit requires a real quadratic field");
  // Split D0 = f^2 * d with d squarefree.
  Int f = 1, d = 1, rest = D0;
  for (Int p = 2; p * p <= rest && p <= 1000000; ++p) {
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int t = 0; t < e / 2; ++t) f *= p;
    if (e % 2 == 1) d *= p;
  }
  if (rest > 1) {
    Int s = isqrt_floor(rest);
    if (s * s == rest) {
      f *= s;
    } else if (rest <= Int("1000000000000")) {
      d *= rest;  // below 10^12 with no factor up to 10^6: squarefree
    } else {
      throw budget_error("discriminant too large to make squarefree");
    }
  }

  auto [x1, y1] = pell_unit(d);
  Int n1 = x1 * x1 - d * y1 * y1;  // +1 or -1
  HalfSurd eps{Rat(2 * x1), Rat(2 * y1)};
  if (d % 4 == 1) {
    // The maximal order may contain a half-integral cube root.
    algebra::RationalInterval sd = algebra::sqrt_outer(
        algebra::RationalInterval(Rat(d), Rat(d)), 80);
    double v = rat_to_double(Rat(x1) + Rat(y1) * sd.mid());
    if (v > 1 && v < 9e17) {
      double u = std::cbrt(v);
      double nn = rat_to_double(Rat(n1));
      double tr = u + nn / u;
      long long xc = std::llround(tr);
      for (long long xx : {xc - 1, xc, xc + 1}) {
        Int X(xx);
        Int num = X * X - 4 * n1;
        if (num <= 0 || num % d != 0) continue;
        Int yy2 = num / d;
        Int Y = isqrt_floor(yy2);
        if (Y * Y != yy2) continue;
        HalfSurd cand{Rat(X), Rat(Y)};
        HalfSurd cube = hs_mul(hs_mul(cand, cand, d), cand, d);
        if (cube.x == Rat(2 * x1) && cube.y == Rat(2 * y1)) {
          eps = cand;
          break;
        }
      }
    }
  }

  // Express sqrt(d) in the lambda basis: sqrt(D0) = sign * (2 lambda + B).
  QElem sq{Rat(B), Rat(2)};
  int s = ctx.sign_at(sq, ctx.lambda_index());
  if (s == 0) throw internal_error("degenerate quadratic root");
  Rat fs = Rat(Int(s)) * Rat(1, f);

  HalfSurd acc{Rat(2), Rat(0)};  // the unit 1
  for (int j = 1; j <= 512; ++j) {
    acc = hs_mul(acc, eps, d);
    // Norm in the field: (x^2 - d y^2) / 4.
    Rat nv = (acc.x * acc.x - Rat(d) * acc.y * acc.y) / 4;
    // Coordinates over (1, lambda): x/2 + (y/2) sqrt(d).
    Rat c1 = acc.y * fs;  // multiplies (2 lambda + B) / 2
    QElem q{acc.x / 2 + c1 * Rat(B) / 2, c1};
    if (nv == 1 && NumberFieldContext::is_int_elem(q)) return ctx.to_elem(q);
  }
  throw internal_error("fundamental unit search exhausted its exponent budget");
}

}  // namespace fpx::spv
