#include "fpx/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>

namespace fpx {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

Int rat_floor(const Rat& x) {
  Int n = numerator(x), d = denominator(x);
  Int q = n / d;
  if (q * d > n) --q;
  return q;
}

Int rat_ceil(const Rat& x) {
  Int n = numerator(x), d = denominator(x);
  Int q = n / d;
  if (q * d < n) ++q;
  return q;
}

Int isqrt_floor(const Int& n) {
  if (n < 0) throw internal_error("isqrt of negative");
  if (n == 0) return 0;
  return boost::multiprecision::sqrt(n);
}

double rat_to_double(const Rat& x) { return x.convert_to<double>(); }

}  // namespace fpx

namespace fpx::algebra {

// ===========================================================================
// IntPolynomial
// ===========================================================================

IntPolynomial::IntPolynomial(std::vector<Int> coeffs) : c(std::move(coeffs)) { normalize(); }

IntPolynomial IntPolynomial::constant(Int v) {
  IntPolynomial p;
  if (v != 0) p.c.push_back(std::move(v));
  return p;
}

IntPolynomial IntPolynomial::x() {
  IntPolynomial p;
  p.c = {Int(0), Int(1)};
  return p;
}

void IntPolynomial::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

const Int& IntPolynomial::leading() const {
  if (c.empty()) throw internal_error("leading coefficient of zero polynomial");
  return c.back();
}

IntPolynomial IntPolynomial::derivative() const {
  IntPolynomial r;
  for (size_t k = 1; k < c.size(); ++k) r.c.push_back(c[k] * Int(k));
  r.normalize();
  return r;
}

Rat IntPolynomial::eval(const Rat& t) const {
  Rat acc = 0;
  for (size_t k = c.size(); k-- > 0;) acc = acc * t + Rat(c[k]);
  return acc;
}

Int IntPolynomial::eval_int(const Int& t) const {
  Int acc = 0;
  for (size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
  return acc;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
  r.normalize();
  return r;
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) r.c[k] -= b.c[k];
  r.normalize();
  return r;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return IntPolynomial::zero();
  IntPolynomial r;
  r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.normalize();
  return r;
}

std::pair<IntPolynomial, IntPolynomial> divmod_monic(const IntPolynomial& a,
                                                     const IntPolynomial& b) {
  if (!b.is_monic()) throw internal_error("divmod_monic requires a monic divisor");
  IntPolynomial q, r = a;
  int db = b.degree();
  while (r.degree() >= db) {
    int shift = r.degree() - db;
    Int coef = r.leading();
    if (q.c.size() < static_cast<size_t>(shift) + 1) q.c.resize(shift + 1, Int(0));
    q.c[shift] += coef;
    for (int k = 0; k <= db; ++k) r.c[k + shift] -= coef * b.c[k];
    r.normalize();
  }
  q.normalize();
  return {q, r};
}

IntPolynomial compose(const IntPolynomial& p, const IntPolynomial& q) {
  IntPolynomial acc;
  for (size_t k = p.c.size(); k-- > 0;) acc = acc * q + IntPolynomial::constant(p.c[k]);
  return acc;
}

IntPolynomial reversed(const IntPolynomial& p) {
  IntPolynomial r;
  r.c.assign(p.c.rbegin(), p.c.rend());
  r.normalize();
  return r;
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw usage_error("empty polynomial");
  std::vector<Int> coeffs;
  size_t i = 0;
  auto bump = [&](size_t exp, const Int& v) {
    if (coeffs.size() <= exp) coeffs.resize(exp + 1, Int(0));
    coeffs[exp] += v;
  };
  while (i < s.size()) {
    int sign = 1;
    bool saw_sign = false;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      saw_sign = true;
      ++i;
    }
    if (i >= s.size()) {
      if (saw_sign) throw usage_error("dangling sign in polynomial: " + text);
      break;
    }
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    bool have_coef = !digits.empty();
    Int coef = have_coef ? Int(digits) : Int(1);
    if (i < s.size() && s[i] == '*') {
      if (!have_coef) throw usage_error("stray '*' in polynomial: " + text);
      ++i;
    }
    size_t exp = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      exp = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string ed;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ed.push_back(s[i++]);
        if (ed.empty()) throw usage_error("missing exponent in polynomial: " + text);
        exp = std::stoul(ed);
        if (exp > 64) throw usage_error("exponent too large in polynomial: " + text);
      }
    } else if (!have_coef) {
      throw usage_error("unexpected character in polynomial: " + text);
    }
    bump(exp, sign > 0 ? coef : -coef);
  }
  IntPolynomial p;
  p.c = std::move(coeffs);
  p.normalize();
  return p;
}

std::string IntPolynomial::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0) continue;
    Int a = c[k];
    if (first) {
      if (a < 0) os << "-";
    } else {
      os << (a < 0 ? " - " : " + ");
    }
    Int mag = a < 0 ? Int(-a) : a;
    if (k == 0) {
      os << mag;
    } else {
      if (mag != 1) os << mag;
      os << var;
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  return os.str();
}

int euler_phi(int m) {
  if (m <= 0) throw usage_error("euler_phi requires a positive argument");
  int result = m, n = m;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      result -= result / p;
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

IntPolynomial cyclotomic_polynomial(int m) {
  if (m <= 0) throw usage_error("cyclotomic index must be positive");
  static std::map<int, IntPolynomial> cache;
  static std::mutex cache_mx;
  {
    std::lock_guard<std::mutex> lk(cache_mx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  IntPolynomial xm1;
  xm1.c.assign(m + 1, Int(0));
  xm1.c[0] = -1;
  xm1.c[m] = 1;
  IntPolynomial value;
  if (m == 1) {
    value = xm1;
  } else {
    IntPolynomial acc = xm1;
    for (int d = 1; d < m; ++d) {
      if (m % d != 0) continue;
      auto [q, r] = divmod_monic(acc, cyclotomic_polynomial(d));
      if (!r.is_zero()) throw internal_error("cyclotomic division had a remainder");
      acc = q;
    }
    value = acc;
  }
  std::lock_guard<std::mutex> lk(cache_mx);
  cache.emplace(m, value);
  return value;
}

// ===========================================================================
// Intervals and boxes
// ===========================================================================

RationalInterval::RationalInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw internal_error("interval endpoints out of order");
}

std::optional<int> RationalInterval::sign() const {
  if (lo > 0) return 1;
  if (hi < 0) return -1;
  if (lo == 0 && hi == 0) return 0;
  return std::nullopt;
}

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  return RationalInterval(a.lo + b.lo, a.hi + b.hi);
}

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
  return RationalInterval(a.lo - b.hi, a.hi - b.lo);
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return RationalInterval(std::min(std::min(p1, p2), std::min(p3, p4)),
                          std::max(std::max(p1, p2), std::max(p3, p4)));
}

RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
  if (b.contains_zero()) throw internal_error("interval division by an interval containing zero");
  Rat p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
  return RationalInterval(std::min(std::min(p1, p2), std::min(p3, p4)),
                          std::max(std::max(p1, p2), std::max(p3, p4)));
}

RationalInterval RationalInterval::square() const {
  if (contains_zero()) {
    Rat m = std::max(lo * lo, hi * hi);
    return RationalInterval(Rat(0), m);
  }
  Rat p = lo * lo, q = hi * hi;
  return RationalInterval(std::min(p, q), std::max(p, q));
}

RationalInterval RationalInterval::round_out(unsigned bits) const {
  Int scale = Int(1) << bits;
  return RationalInterval(Rat(rat_floor(lo * Rat(scale)), scale), Rat(rat_ceil(hi * Rat(scale)), scale));
}

ComplexBox ComplexBox::point(const Rat& r, const Rat& i) {
  return ComplexBox(RationalInterval::point(r), RationalInterval::point(i));
}

Rat ComplexBox::max_width() const { return std::max(re.width(), im.width()); }

ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) {
  return ComplexBox(a.re + b.re, a.im + b.im);
}

ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) {
  return ComplexBox(a.re - b.re, a.im - b.im);
}

ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
  return ComplexBox(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

ComplexBox operator/(const ComplexBox& a, const ComplexBox& b) {
  RationalInterval den = b.abs_square();
  if (den.lo <= 0) throw internal_error("complex interval division by a box containing zero");
  ComplexBox num = a * b.conj();
  return ComplexBox(num.re / den, num.im / den);
}

ComplexBox ComplexBox::round_out(unsigned bits) const {
  return ComplexBox(re.round_out(bits), im.round_out(bits));
}

RationalInterval sqrt_outer(const RationalInterval& v, unsigned bits) {
  if (v.lo < 0) throw internal_error("sqrt_outer on a negative interval");
  Int scale = Int(1) << bits;
  Int sq = scale * scale;
  // floor(sqrt(lo) * 2^bits) and ceil(sqrt(hi) * 2^bits) by integer sqrt.
  Int lo_n = rat_floor(v.lo * Rat(sq));
  Int lo_s = isqrt_floor(lo_n);
  Int hi_n = rat_ceil(v.hi * Rat(sq));
  Int hi_s = isqrt_floor(hi_n);
  if (hi_s * hi_s < hi_n) ++hi_s;
  return RationalInterval(Rat(lo_s, scale), Rat(hi_s, scale));
}

// ===========================================================================
// Rational polynomial helpers (local): Sturm chains and extended gcd.
// ===========================================================================

namespace {

using QPoly = std::vector<Rat>;

void qp_normalize(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qp_from(const IntPolynomial& p) {
  QPoly r;
  r.reserve(p.c.size());
  for (const Int& v : p.c) r.emplace_back(v);
  return r;
}

int qp_degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

Rat qp_eval(const QPoly& p, const Rat& t) {
  Rat acc = 0;
  for (size_t k = p.size(); k-- > 0;) acc = acc * t + p[k];
  return acc;
}

QPoly qp_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] -= b[k];
  qp_normalize(r);
  return r;
}

QPoly qp_scale(const QPoly& a, const Rat& s) {
  QPoly r = a;
  for (Rat& v : r) v *= s;
  qp_normalize(r);
  return r;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  qp_normalize(r);
  return r;
}

// Remainder of a by b (b nonzero), plus the quotient.
std::pair<QPoly, QPoly> qp_divmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) throw internal_error("rational polynomial division by zero");
  QPoly r = a, q;
  int db = qp_degree(b);
  Rat lead = b.back();
  while (qp_degree(r) >= db) {
    int shift = qp_degree(r) - db;
    Rat coef = r.back() / lead;
    if (q.size() < static_cast<size_t>(shift) + 1) q.resize(shift + 1, Rat(0));
    q[shift] += coef;
    for (int k = 0; k <= db; ++k) r[k + shift] -= coef * b[k];
    qp_normalize(r);
  }
  return {q, r};
}

// Rescale by a positive constant so coefficients are coprime integers.
void qp_tidy_positive(QPoly& p) {
  if (p.empty()) return;
  Int num_gcd = 0, den_lcm = 1;
  for (const Rat& v : p) {
    num_gcd = boost::multiprecision::gcd(num_gcd, numerator(v) < 0 ? Int(-numerator(v)) : numerator(v));
    den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, denominator(v)) * denominator(v);
  }
  if (num_gcd == 0) return;
  Rat s(den_lcm, num_gcd);
  for (Rat& v : p) v *= s;
}

std::vector<QPoly> sturm_chain(const IntPolynomial& p) {
  std::vector<QPoly> chain;
  chain.push_back(qp_from(p));
  chain.push_back(qp_from(p.derivative()));
  qp_normalize(chain[0]);
  qp_normalize(chain[1]);
  while (!chain.back().empty() && qp_degree(chain.back()) >= 1) {
    QPoly rem = qp_divmod(chain[chain.size() - 2], chain.back()).second;
    rem = qp_scale(rem, Rat(-1));
    qp_tidy_positive(rem);
    if (rem.empty()) break;
    chain.push_back(std::move(rem));
  }
  return chain;
}

int sign_of(const Rat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int sturm_variations(const std::vector<QPoly>& chain, const Rat& t) {
  int changes = 0, prev = 0;
  for (const QPoly& f : chain) {
    int s = sign_of(qp_eval(f, t));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

// Number of real roots in (a, b].
int sturm_count(const std::vector<QPoly>& chain, const Rat& a, const Rat& b) {
  return sturm_variations(chain, a) - sturm_variations(chain, b);
}

// Extended gcd over Q[x]: returns (g, u) with u*a == g (mod b), g constant
// when gcd(a, b) = 1.  Only u is needed for inverses mod the minimal poly.
std::pair<QPoly, QPoly> qp_half_xgcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  QPoly u0 = {Rat(1)}, u1 = {};
  while (!r1.empty()) {
    auto [q, r2] = qp_divmod(r0, r1);
    QPoly u2 = qp_sub(u0, qp_mul(q, u1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  return {r0, u0};
}

std::pair<Rat, Rat> eval_complex_exact(const IntPolynomial& p, const Rat& xr, const Rat& xi) {
  Rat ar = 0, ai = 0;
  for (size_t k = p.c.size(); k-- > 0;) {
    Rat nr = ar * xr - ai * xi + Rat(p.c[k]);
    Rat ni = ar * xi + ai * xr;
    ar = std::move(nr);
    ai = std::move(ni);
  }
  return {ar, ai};
}

ComplexBox eval_poly_box_int(const std::vector<Int>& coeffs, const ComplexBox& z, unsigned prec) {
  ComplexBox acc = ComplexBox::point(Rat(0), Rat(0));
  for (size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * z;
    acc.re = acc.re + RationalInterval::point(Rat(coeffs[k]));
    acc = acc.round_out(prec);
  }
  return acc;
}

ComplexBox eval_poly_box_rat(const std::vector<Rat>& coeffs, const ComplexBox& z, unsigned prec) {
  ComplexBox acc = ComplexBox::point(Rat(0), Rat(0));
  for (size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * z;
    acc.re = acc.re + RationalInterval::point(coeffs[k]);
    acc = acc.round_out(prec);
  }
  return acc;
}

Rat dyadic_round(long double v, unsigned bits) {
  long double scaled = v * std::pow(2.0L, static_cast<long double>(bits));
  long double r = std::llroundl(std::clamp(scaled, -9e17L, 9e17L));
  return Rat(Int(static_cast<long long>(r)), Int(1) << bits);
}

}  // namespace

// ===========================================================================
// NumberFieldContext
// ===========================================================================

struct NumberFieldContext::State {
  IntPolynomial p;
  int d = 0;
  std::vector<std::vector<Int>> red;  // red[k] = coords of x^{d+k} mod p
  mutable std::vector<RootBox> roots;
  std::vector<int> conj_of;
  std::vector<int> refine_rep;  // index actually refined (upper-half rep)
  int lam = 0;
  std::vector<QPoly> sturm;
  mutable std::mutex mx;

  // --- root refinement, callers hold no lock ---
  void refine_to(int i, const Rat& eps) const;
  void refine_real_locked(int i, const Rat& eps) const;
  void refine_complex_locked(int i, const Rat& eps) const;
  RootBox snapshot(int i, const Rat& eps) const;
};

namespace {

// One interval Newton step; returns false when the step fails to certify.
bool newton_step(const IntPolynomial& p, const IntPolynomial& dp, ComplexBox& X, bool require_subset,
                 unsigned prec) {
  ComplexBox dX = eval_poly_box_int(dp.c, X, prec);
  if (dX.abs_square().lo <= 0) return false;
  Rat mr = X.re.mid(), mi = X.im.mid();
  auto [pr, pi] = eval_complex_exact(p, mr, mi);
  ComplexBox pm = ComplexBox::point(pr, pi);
  ComplexBox N = ComplexBox::point(mr, mi) - pm / dX;
  if (require_subset) {
    bool inside = N.re.lo > X.re.lo && N.re.hi < X.re.hi && N.im.lo > X.im.lo && N.im.hi < X.im.hi;
    if (!inside) return false;
  }
  RationalInterval nre(std::max(N.re.lo, X.re.lo), std::min(N.re.hi, X.re.hi));
  RationalInterval nim(std::max(N.im.lo, X.im.lo), std::min(N.im.hi, X.im.hi));
  X = ComplexBox(nre, nim).round_out(prec);
  return true;
}

unsigned prec_for(const Rat& eps) {
  // Enough dyadic bits that rounding noise stays well under eps.
  unsigned bits = 8;
  Rat w(1);
  while (w > eps && bits < 1u << 20) {
    w /= 2;
    ++bits;
  }
  return bits + 64;
}

}  // namespace

void NumberFieldContext::State::refine_real_locked(int i, const Rat& eps) const {
  RootBox& rb = roots[i];
  if (rb.x.width() <= eps) return;
  if (d == 1) return;  // exact point already
  int slo = sign_of(p.eval(rb.x.lo));
  if (slo == 0) throw internal_error("rational endpoint is a root of an irreducible polynomial");
  int guard = 0;
  while (rb.x.width() > eps) {
    Rat mid = rb.x.mid();
    int sm = sign_of(p.eval(mid));
    if (sm == 0) throw internal_error("rational midpoint is a root of an irreducible polynomial");
    if (sm == slo) {
      rb.x.lo = mid;
    } else {
      rb.x.hi = mid;
    }
    if (++guard > 400000) throw internal_error("real root refinement exceeded its budget");
  }
}

void NumberFieldContext::State::refine_complex_locked(int i, const Rat& eps) const {
  int rep = refine_rep[i];
  RootBox& rb = roots[rep];
  IntPolynomial dp = p.derivative();
  int guard = 0;
  unsigned prec = prec_for(eps);
  while (rb.x.width() > eps || rb.y.width() > eps) {
    ComplexBox X = rb.box();
    if (!newton_step(p, dp, X, false, prec)) throw internal_error("complex root refinement lost certification");
    if (X.max_width() >= rb.box().max_width())
      prec += 64;  // rounding-dominated; retry with more working bits
    rb.x = X.re;
    rb.y = X.im;
    if (++guard > 4000) throw internal_error("complex root refinement exceeded its budget");
  }
  if (rep != i) {
    roots[i].x = rb.x;
    roots[i].y = -rb.y;
  }
}

void NumberFieldContext::State::refine_to(int i, const Rat& eps) const {
  std::lock_guard<std::mutex> lk(mx);
  if (roots[i].real) {
    refine_real_locked(i, eps);
  } else {
    refine_complex_locked(i, eps);
  }
}

RootBox NumberFieldContext::State::snapshot(int i, const Rat& eps) const {
  refine_to(i, eps);
  std::lock_guard<std::mutex> lk(mx);
  return roots[i];
}

NumberFieldContext NumberFieldContext::make(const IntPolynomial& p_in,
                                            std::optional<std::pair<double, double>> root_hint) {
  IntPolynomial p = p_in;
  p.normalize();
  if (p.degree() < 1) throw usage_error("minimal polynomial must have degree at least 1");
  if (!p.is_monic()) throw usage_error("minimal polynomial must be monic: " + p.str());
  int d = p.degree();
  if (d > 16) throw budget_error("number field degree exceeds the supported bound of 16");

  auto st = std::make_shared<State>();
  st->p = p;
  st->d = d;

  if (d >= 2) {
    // Rational roots would make p reducible.
    Int c0 = p.constant_term();
    if (c0 == 0) throw usage_error("polynomial is reducible: " + p.str());
    Int a0 = c0 < 0 ? Int(-c0) : c0;
    for (Int r = 1; r * r <= a0 && r <= 1000000; ++r) {
      if (a0 % r != 0) continue;
      for (const Int& cand : {Int(r), Int(a0 / r)}) {
        if (p.eval_int(cand) == 0 || p.eval_int(-cand) == 0)
          throw usage_error("polynomial is reducible: " + p.str());
      }
    }
  }

  st->sturm = sturm_chain(p);
  if (d >= 2) {
    const QPoly& last = st->sturm.back();
    if (qp_degree(last) != 0) throw usage_error("polynomial is reducible: " + p.str());
  }

  // Cauchy bound: all roots have modulus < 1 + max |c_k|.
  Rat bound(1);
  for (const Int& ck : p.c) {
    Rat a(ck < 0 ? Int(-ck) : ck);
    if (a > bound) bound = a;
  }
  bound += 1;

  // Real roots by Sturm bisection.
  std::vector<RationalInterval> real_ivs;
  if (d >= 2) {
    struct Seg {
      Rat a, b;
      int cnt;
    };
    std::vector<Seg> work;
    int total = sturm_count(st->sturm, -bound, bound);
    if (total > 0) work.push_back({-bound, bound, total});
    while (!work.empty()) {
      Seg s = work.back();
      work.pop_back();
      if (s.cnt == 1 && s.b - s.a <= Rat(1, 1024)) {
        real_ivs.emplace_back(s.a, s.b);
        continue;
      }
      Rat m = (s.a + s.b) / 2;
      if (d >= 2 && p.eval(m) == 0) throw internal_error("rational root in irreducible polynomial");
      int left = sturm_count(st->sturm, s.a, m);
      if (left > 0) work.push_back({s.a, m, left});
      if (s.cnt - left > 0) work.push_back({m, s.b, s.cnt - left});
    }
  }
  if (d == 1) real_ivs.push_back(RationalInterval::point(Rat(-p.c[0])));
  int n_real = static_cast<int>(real_ivs.size());
  if ((d - n_real) % 2 != 0) throw internal_error("real root count parity mismatch");
  int n_pairs = (d - n_real) / 2;

  // Complex roots: float approximation then interval Newton certification.
  std::vector<ComplexBox> upper;  // strictly positive imaginary part
  if (n_pairs > 0) {
    using CLD = std::complex<long double>;
    std::vector<CLD> a(d + 1);
    for (int k = 0; k <= d; ++k) a[k] = CLD(p.c[k].convert_to<long double>(), 0.0L);
    auto eval_ld = [&](CLD z) {
      CLD acc(0, 0);
      for (int k = d; k >= 0; --k) acc = acc * z + a[k];
      return acc;
    };
    std::vector<CLD> z(d);
    long double r0 = bound.convert_to<long double>();
    for (int k = 0; k < d; ++k)
      z[k] = std::pow(CLD(0.4L, 0.9L), k + 1) * CLD(r0 / 2, 0);
    for (int iter = 0; iter < 2000; ++iter) {
      long double max_delta = 0;
      for (int k = 0; k < d; ++k) {
        CLD den(1, 0);
        for (int j = 0; j < d; ++j)
          if (j != k) den *= (z[k] - z[j]);
        if (std::abs(den) == 0) {
          z[k] += CLD(1e-3L, 1e-3L);
          continue;
        }
        CLD delta = eval_ld(z[k]) / den;
        z[k] -= delta;
        max_delta = std::max(max_delta, std::abs(delta));
      }
      if (max_delta < 1e-19L) break;
    }
    std::vector<CLD> cand;
    for (int k = 0; k < d; ++k)
      if (z[k].imag() > 1e-9L) cand.push_back(z[k]);
    std::sort(cand.begin(), cand.end(), [](const CLD& u, const CLD& v) {
      if (u.real() != v.real()) return u.real() < v.real();
      return u.imag() < v.imag();
    });
    // Collapse numerically duplicated approximations.
    std::vector<CLD> uniq;
    for (const CLD& w : cand) {
      if (!uniq.empty() && std::abs(w - uniq.back()) < 1e-9L) continue;
      uniq.push_back(w);
    }
    if (static_cast<int>(uniq.size()) != n_pairs)
      throw internal_error("complex root approximation did not separate all roots");
    IntPolynomial dp = p.derivative();
    for (const CLD& w : uniq) {
      Rat cr = dyadic_round(w.real(), 52);
      Rat ci = dyadic_round(w.imag(), 52);
      bool ok = false;
      for (int rbits : {44, 40, 36, 30, 24, 18, 12}) {
        Rat r(Int(1), Int(1) << rbits);
        ComplexBox X(RationalInterval(cr - r, cr + r), RationalInterval(ci - r, ci + r));
        ComplexBox Y = X;
        if (newton_step(p, dp, Y, true, 128)) {
          upper.push_back(Y);
          ok = true;
          break;
        }
      }
      if (!ok) throw internal_error("complex root certification failed");
    }
  }

  // Assemble, sort by (re, im), wire conjugate partners.
  struct Entry {
    RootBox box;
    int partner_tag;  // pair id, -1 for real
    bool upper_half;
  };
  std::vector<Entry> entries;
  for (const RationalInterval& iv : real_ivs)
    entries.push_back({RootBox{true, iv, RationalInterval::point(Rat(0))}, -1, false});
  for (size_t k = 0; k < upper.size(); ++k) {
    entries.push_back({RootBox{false, upper[k].re, upper[k].im}, static_cast<int>(k), true});
    entries.push_back({RootBox{false, upper[k].re, -upper[k].im}, static_cast<int>(k), false});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& u, const Entry& v) {
    Rat ur = u.box.x.mid(), vr = v.box.x.mid();
    if (ur != vr) return ur < vr;
    return u.box.y.mid() < v.box.y.mid();
  });
  st->roots.resize(d);
  st->conj_of.assign(d, 0);
  st->refine_rep.assign(d, 0);
  std::map<int, std::pair<int, int>> pair_pos;  // tag -> (lower idx, upper idx)
  for (int i = 0; i < d; ++i) {
    st->roots[i] = entries[i].box;
    if (entries[i].partner_tag < 0) {
      st->conj_of[i] = i;
      st->refine_rep[i] = i;
    } else {
      auto& pp = pair_pos[entries[i].partner_tag];
      (entries[i].upper_half ? pp.second : pp.first) = i + 1;  // 1-based to spot gaps
    }
  }
  for (auto& [tag, pp] : pair_pos) {
    int lo_i = pp.first - 1, up_i = pp.second - 1;
    if (lo_i < 0 || up_i < 0) throw internal_error("conjugate pairing failed");
    st->conj_of[lo_i] = up_i;
    st->conj_of[up_i] = lo_i;
    st->refine_rep[lo_i] = up_i;
    st->refine_rep[up_i] = up_i;
  }

  // Separate all enclosures so membership queries are unambiguous.
  {
    bool again = true;
    int guard = 0;
    while (again) {
      again = false;
      for (int i = 0; i < d && !again; ++i) {
        for (int j = i + 1; j < d && !again; ++j) {
          bool overlap_re = !(st->roots[i].x.hi < st->roots[j].x.lo || st->roots[j].x.hi < st->roots[i].x.lo);
          bool overlap_im = !(st->roots[i].y.hi < st->roots[j].y.lo || st->roots[j].y.hi < st->roots[i].y.lo);
          if (overlap_re && overlap_im) {
            Rat eps = std::min(st->roots[i].box().max_width(), st->roots[j].box().max_width()) / 4;
            if (eps == 0) throw internal_error("coincident root enclosures");
            std::lock_guard<std::mutex> lk(st->mx);
            if (st->roots[i].real)
              st->refine_real_locked(i, eps);
            else
              st->refine_complex_locked(i, eps);
            if (st->roots[j].real)
              st->refine_real_locked(j, eps);
            else
              st->refine_complex_locked(j, eps);
            again = true;
          }
        }
      }
      if (++guard > 200) throw internal_error("root separation exceeded its budget");
    }
  }

  // Irreducibility: no conjugation-closed proper subset of roots multiplies
  // to an integer monic factor.
  if (d >= 2) {
    for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
      int size = __builtin_popcount(mask);
      if (size > d / 2) continue;
      bool closed = true;
      for (int i = 0; i < d && closed; ++i)
        if ((mask >> i) & 1u)
          if (!((mask >> st->conj_of[i]) & 1u)) closed = false;
      if (!closed) continue;
      Rat eps(1, Int(1) << 16);
      bool decided = false;
      while (!decided) {
        for (int i = 0; i < d; ++i)
          if ((mask >> i) & 1u) st->refine_to(i, eps);
        std::vector<ComplexBox> coeffs{ComplexBox::point(Rat(1), Rat(0))};
        {
          std::lock_guard<std::mutex> lk(st->mx);
          for (int i = 0; i < d; ++i) {
            if (!((mask >> i) & 1u)) continue;
            ComplexBox z = st->roots[i].box();
            std::vector<ComplexBox> next(coeffs.size() + 1, ComplexBox::point(Rat(0), Rat(0)));
            for (size_t k = 0; k < coeffs.size(); ++k) {
              next[k + 1] = next[k + 1] + coeffs[k];
              next[k] = next[k] - coeffs[k] * z;
            }
            coeffs = std::move(next);
          }
        }
        bool tight = true;
        for (const ComplexBox& cb : coeffs)
          if (cb.re.width() >= Rat(1, 2)) tight = false;
        if (!tight) {
          eps /= 16;
          continue;
        }
        decided = true;
        bool integral = true;
        IntPolynomial cand;
        cand.c.assign(coeffs.size(), Int(0));
        for (size_t k = 0; k < coeffs.size() && integral; ++k) {
          Int n = rat_floor(coeffs[k].re.mid() + Rat(1, 2));
          if (!coeffs[k].re.contains(Rat(n))) integral = false;
          cand.c[k] = n;
        }
        if (integral) {
          cand.normalize();
          if (cand.degree() >= 1) {
            auto [q, r] = divmod_monic(p, cand);
            (void)q;
            if (r.is_zero()) throw usage_error("polynomial is reducible: " + p.str());
          }
        }
      }
    }
  }

  // Reduction table for products: x^{d+k} mod p.
  if (d >= 1) {
    std::vector<Int> row(d);
    for (int k = 0; k < d; ++k) row[k] = -p.c[k];
    st->red.push_back(row);
    for (int k = 1; k <= d - 2; ++k) {
      std::vector<Int> nxt(d, Int(0));
      Int carry = row[d - 1];
      for (int j = d - 1; j >= 1; --j) nxt[j] = row[j - 1];
      nxt[0] = 0;
      for (int j = 0; j < d; ++j) nxt[j] += carry * st->red[0][j];
      st->red.push_back(nxt);
      row = nxt;
    }
  }

  // Designated root.
  if (root_hint) {
    double hr = root_hint->first, hi = root_hint->second;
    int best = 0;
    double best_d2 = 0;
    for (int i = 0; i < d; ++i) {
      double rr = rat_to_double(st->roots[i].x.mid());
      double ri = rat_to_double(st->roots[i].y.mid());
      double d2 = (rr - hr) * (rr - hr) + (ri - hi) * (ri - hi);
      if (i == 0 || d2 < best_d2) {
        best = i;
        best_d2 = d2;
      }
    }
    st->lam = best;
  } else {
    int best = 0;
    Rat best_m(-1);
    bool best_real = false;
    for (int i = 0; i < d; ++i) {
      Rat m = st->roots[i].x.mid() * st->roots[i].x.mid() + st->roots[i].y.mid() * st->roots[i].y.mid();
      bool is_r = st->roots[i].real;
      if (m > best_m || (m == best_m && is_r && !best_real)) {
        best = i;
        best_m = m;
        best_real = is_r;
      }
    }
    st->lam = best;
  }

  NumberFieldContext ctx;
  ctx.s_ = std::move(st);
  return ctx;
}

int NumberFieldContext::degree() const { return s_->d; }
const IntPolynomial& NumberFieldContext::minpoly() const { return s_->p; }
int NumberFieldContext::lambda_index() const { return s_->lam; }
bool NumberFieldContext::lambda_is_real() const { return s_->roots[s_->lam].real; }
int NumberFieldContext::root_count() const { return s_->d; }
bool NumberFieldContext::root_is_real(int i) const { return s_->roots.at(i).real; }
int NumberFieldContext::conjugate_index(int i) const { return s_->conj_of.at(i); }

std::vector<int> NumberFieldContext::real_root_indices() const {
  std::vector<int> out;
  for (int i = 0; i < s_->d; ++i)
    if (s_->roots[i].real) out.push_back(i);
  return out;
}

std::vector<int> NumberFieldContext::real_unit_interval_indices() const {
  std::vector<int> out;
  for (int i : real_root_indices()) {
    if (s_->d == 1) {
      Rat v = s_->roots[i].x.lo;
      if (v > 0 && v < 1) out.push_back(i);
      continue;
    }
    // Roots are irrational here, so enclosures eventually clear 0 and 1.
    Rat eps(1, 1 << 20);
    for (;;) {
      RootBox rb = s_->snapshot(i, eps);
      if (rb.x.contains(Rat(0)) || rb.x.contains(Rat(1))) {
        eps /= 1024;
        continue;
      }
      if (rb.x.lo > 0 && rb.x.hi < 1) out.push_back(i);
      break;
    }
  }
  return out;
}

RootBox NumberFieldContext::root_enclosure(int i, const Rat& eps) const { return s_->snapshot(i, eps); }

Elem NumberFieldContext::zero() const { return Elem(s_->d, Int(0)); }

Elem NumberFieldContext::one() const {
  Elem e(s_->d, Int(0));
  e[0] = 1;
  return e;
}

Elem NumberFieldContext::lambda() const {
  Elem e(s_->d, Int(0));
  if (s_->d == 1) {
    e[0] = -s_->p.c[0];
  } else {
    e[1] = 1;
  }
  return e;
}

Elem NumberFieldContext::from_int(const Int& v) const {
  Elem e(s_->d, Int(0));
  e[0] = v;
  return e;
}

QElem NumberFieldContext::to_q(const Elem& e) const {
  QElem q(e.size());
  for (size_t k = 0; k < e.size(); ++k) q[k] = Rat(e[k]);
  return q;
}

bool NumberFieldContext::is_int_elem(const QElem& e) {
  for (const Rat& v : e)
    if (denominator(v) != 1) return false;
  return true;
}

Elem NumberFieldContext::to_elem(const QElem& e) const {
  if (!is_int_elem(e)) throw internal_error("rational element is not integral");
  Elem r(s_->d, Int(0));
  for (size_t k = 0; k < e.size() && k < r.size(); ++k) r[k] = numerator(e[k]);
  return r;
}

namespace {
void check_size(size_t got, int d, const char* who) {
  if (got != static_cast<size_t>(d)) throw internal_error(std::string(who) + ": element size mismatch");
}
}  // namespace

Elem NumberFieldContext::add(const Elem& a, const Elem& b) const {
  check_size(a.size(), s_->d, "add");
  check_size(b.size(), s_->d, "add");
  Elem r(s_->d);
  for (int k = 0; k < s_->d; ++k) r[k] = a[k] + b[k];
  return r;
}

Elem NumberFieldContext::sub(const Elem& a, const Elem& b) const {
  check_size(a.size(), s_->d, "sub");
  check_size(b.size(), s_->d, "sub");
  Elem r(s_->d);
  for (int k = 0; k < s_->d; ++k) r[k] = a[k] - b[k];
  return r;
}

Elem NumberFieldContext::neg(const Elem& a) const {
  Elem r(s_->d);
  for (int k = 0; k < s_->d; ++k) r[k] = -a[k];
  return r;
}

Elem NumberFieldContext::mul_int(const Elem& a, const Int& k) const {
  Elem r(s_->d);
  for (int j = 0; j < s_->d; ++j) r[j] = a[j] * k;
  return r;
}

Elem NumberFieldContext::mul(const Elem& a, const Elem& b) const {
  check_size(a.size(), s_->d, "mul");
  check_size(b.size(), s_->d, "mul");
  int d = s_->d;
  std::vector<Int> full(2 * d - 1, Int(0));
  for (int i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < d; ++j) full[i + j] += a[i] * b[j];
  }
  Elem r(full.begin(), full.begin() + d);
  for (int k = d; k < 2 * d - 1; ++k) {
    if (full[k] == 0) continue;
    const std::vector<Int>& row = s_->red[k - d];
    for (int j = 0; j < d; ++j) r[j] += full[k] * row[j];
  }
  return r;
}

Elem NumberFieldContext::mul_lambda(const Elem& a) const {
  int d = s_->d;
  if (d == 1) return mul_int(a, -s_->p.c[0]);
  Elem r(d, Int(0));
  for (int j = d - 1; j >= 1; --j) r[j] = a[j - 1];
  Int carry = a[d - 1];
  if (carry != 0)
    for (int j = 0; j < d; ++j) r[j] += carry * s_->red[0][j];
  return r;
}

Elem NumberFieldContext::pow(const Elem& a, unsigned e) const {
  Elem base = a, acc = one();
  while (e > 0) {
    if (e & 1u) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1u;
  }
  return acc;
}

QElem NumberFieldContext::qadd(const QElem& a, const QElem& b) const {
  check_size(a.size(), s_->d, "qadd");
  check_size(b.size(), s_->d, "qadd");
  QElem r(s_->d);
  for (int k = 0; k < s_->d; ++k) r[k] = a[k] + b[k];
  return r;
}

QElem NumberFieldContext::qsub(const QElem& a, const QElem& b) const {
  QElem r(s_->d);
  for (int k = 0; k < s_->d; ++k) r[k] = a[k] - b[k];
  return r;
}

QElem NumberFieldContext::qscale(const QElem& a, const Rat& k) const {
  QElem r(s_->d);
  for (int j = 0; j < s_->d; ++j) r[j] = a[j] * k;
  return r;
}

QElem NumberFieldContext::qmul(const QElem& a, const QElem& b) const {
  check_size(a.size(), s_->d, "qmul");
  check_size(b.size(), s_->d, "qmul");
  int d = s_->d;
  std::vector<Rat> full(2 * d - 1, Rat(0));
  for (int i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < d; ++j) full[i + j] += a[i] * b[j];
  }
  QElem r(full.begin(), full.begin() + d);
  for (int k = d; k < 2 * d - 1; ++k) {
    if (full[k] == 0) continue;
    const std::vector<Int>& row = s_->red[k - d];
    for (int j = 0; j < d; ++j) r[j] += full[k] * Rat(row[j]);
  }
  return r;
}

QElem NumberFieldContext::qinverse(const QElem& a) const {
  check_size(a.size(), s_->d, "qinverse");
  QPoly ap(a.begin(), a.end());
  qp_normalize(ap);
  if (ap.empty()) throw usage_error("division by zero element");
  auto [g, u] = qp_half_xgcd(ap, qp_from(s_->p));
  if (qp_degree(g) != 0) throw internal_error("gcd with irreducible minimal polynomial is nonconstant");
  QElem r(s_->d, Rat(0));
  Rat ginv = Rat(1) / g[0];
  // u may have degree up to d-1 (mod p it always fits).
  QPoly um = qp_divmod(u, qp_from(s_->p)).second;
  for (size_t k = 0; k < um.size(); ++k) r[k] = um[k] * ginv;
  return r;
}

bool NumberFieldContext::divide(const Elem& a, const Elem& b, Elem& out) const {
  QElem q = qmul(to_q(a), qinverse(to_q(b)));
  if (!is_int_elem(q)) return false;
  out = to_elem(q);
  return true;
}

Int NumberFieldContext::norm(const Elem& a) const {
  int d = s_->d;
  // Multiplication matrix: column j holds a * lambda^j.
  std::vector<std::vector<Int>> M(d, std::vector<Int>(d));
  Elem col = a;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) M[i][j] = col[i];
    if (j + 1 < d) col = mul_lambda(col);
  }
  // Bareiss fraction-free elimination.
  Int prev(1);
  int sign = 1;
  for (int k = 0; k < d - 1; ++k) {
    if (M[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < d; ++i)
        if (M[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < d; ++i) {
      for (int j = k + 1; j < d; ++j) {
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
      }
      M[i][k] = 0;
    }
    prev = M[k][k];
  }
  return sign > 0 ? M[d - 1][d - 1] : Int(-M[d - 1][d - 1]);
}

IntPolynomial NumberFieldContext::element_charpoly(const Elem& a) const {
  int d = s_->d;
  std::vector<std::vector<Int>> A(d, std::vector<Int>(d));
  Elem col = a;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) A[i][j] = col[i];
    if (j + 1 < d) col = mul_lambda(col);
  }
  // Faddeev-LeVerrier: the division by k is always exact over the integers.
  std::vector<Int> coeff(d + 1);
  coeff[d] = 1;
  std::vector<std::vector<Int>> M(d, std::vector<Int>(d));
  for (int i = 0; i < d; ++i) M[i][i] = 1;
  std::vector<std::vector<Int>> AM(d, std::vector<Int>(d));
  for (int k = 1; k <= d; ++k) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Int acc(0);
        for (int t = 0; t < d; ++t) acc += A[i][t] * M[t][j];
        AM[i][j] = acc;
      }
    Int tr(0);
    for (int i = 0; i < d; ++i) tr += AM[i][i];
    coeff[d - k] = -tr / k;
    M = AM;
    for (int i = 0; i < d; ++i) M[i][i] += coeff[d - k];
  }
  IntPolynomial result(std::move(coeff));
  result.normalize();
  return result;
}

ComplexBox NumberFieldContext::value_box(const QElem& e, int i, const Rat& eps) const {
  check_size(e.size(), s_->d, "value_box");
  Rat weps = eps / 4;
  unsigned prec = prec_for(eps);
  for (int rounds = 0; rounds < 100000; ++rounds) {
    RootBox rb = s_->snapshot(i, weps);
    ComplexBox v = eval_poly_box_rat(e, rb.box(), prec);
    if (v.max_width() <= eps) return v;
    weps /= 16;
    prec += 16;
  }
  throw internal_error("value_box failed to converge");
}

ComplexBox NumberFieldContext::value_box(const Elem& e, int i, const Rat& eps) const {
  return value_box(to_q(e), i, eps);
}

int NumberFieldContext::sign_at(const QElem& e, int i) const {
  if (!s_->roots.at(i).real) throw internal_error("sign_at requires a real root");
  bool all_zero = true;
  for (const Rat& v : e)
    if (v != 0) all_zero = false;
  if (all_zero) return 0;
  // Rational values occur only for constant elements.
  bool constant = true;
  for (size_t k = 1; k < e.size(); ++k)
    if (e[k] != 0) constant = false;
  if (constant || s_->d == 1) {
    Rat v = e[0];
    if (s_->d == 1) {
      Rat lam(-s_->p.c[0]);
      Rat acc = 0;
      for (size_t k = e.size(); k-- > 0;) acc = acc * lam + e[k];
      v = acc;
    }
    return sign_of(v);
  }
  Rat eps(1, 1 << 16);
  Rat step(Int(1), Int(1) << 64);
  for (int rounds = 0; rounds < 256; ++rounds) {
    ComplexBox v = value_box(e, i, eps);
    auto s = v.re.sign();
    if (s) return *s;
    eps *= step;
  }
  throw internal_error("sign_at failed to separate a nonzero value from zero");
}

int NumberFieldContext::sign_at(const Elem& e, int i) const { return sign_at(to_q(e), i); }

int NumberFieldContext::cmp_abs_lambda(const Elem& e, const Rat& r) const {
  if (lambda_is_real()) {
    int s = sign_at(e, s_->lam);
    if (s == 0) return r > 0 ? -1 : (r == 0 ? 0 : 1);
    QElem shifted = to_q(s > 0 ? e : neg(e));
    shifted[0] -= r;
    return sign_at(shifted, s_->lam);
  }
  Rat r2 = r * r;
  Rat eps(1, 1 << 16);
  Rat floor_eps(Int(1), Int(1) << 256);
  for (;;) {
    ComplexBox v = value_box(e, s_->lam, eps);
    RationalInterval a2 = v.abs_square();
    if (a2.lo > r2) return 1;
    if (a2.hi < r2) return -1;
    if (eps < floor_eps) return 0;
    eps /= 1024;
  }
}

RationalInterval NumberFieldContext::abs_lambda(const Elem& e, const Rat& eps) const {
  Rat weps = eps / 8;
  for (int rounds = 0; rounds < 64; ++rounds) {
    ComplexBox v = value_box(e, s_->lam, weps);
    unsigned bits = prec_for(eps);
    RationalInterval r = sqrt_outer(v.abs_square(), bits);
    if (r.width() <= eps) return r;
    weps /= 64;
  }
  throw internal_error("abs_lambda failed to converge");
}

double NumberFieldContext::approx_at(const QElem& e, int i, bool imag_part) const {
  ComplexBox v = value_box(e, i, Rat(1, Int(1) << 60));
  return rat_to_double(imag_part ? v.im.mid() : v.re.mid());
}

Int NumberFieldContext::floor_value(const QElem& e, int i) const {
  if (!s_->roots.at(i).real) throw internal_error("floor_value requires a real root");
  bool constant = true;
  for (size_t k = 1; k < e.size(); ++k)
    if (e[k] != 0) constant = false;
  if (constant && s_->d != 1) return rat_floor(e[0]);
  if (s_->d == 1) {
    Rat lam(-s_->p.c[0]);
    Rat acc = 0;
    for (size_t k = e.size(); k-- > 0;) acc = acc * lam + e[k];
    return rat_floor(acc);
  }
  Rat eps(1, 1 << 12);
  for (int rounds = 0; rounds < 4096; ++rounds) {
    ComplexBox v = value_box(e, i, eps);
    Int flo = rat_floor(v.re.lo), fhi = rat_floor(v.re.hi);
    if (flo == fhi) return flo;
    eps /= 4096;
  }
  throw internal_error("floor_value failed to converge");
}

Int NumberFieldContext::ceil_value(const QElem& e, int i) const {
  QElem m(e.size());
  for (size_t k = 0; k < e.size(); ++k) m[k] = -e[k];
  return -floor_value(m, i);
}

Int NumberFieldContext::floor_value(const Elem& e, int i) const { return floor_value(to_q(e), i); }
Int NumberFieldContext::ceil_value(const Elem& e, int i) const { return ceil_value(to_q(e), i); }

namespace {
std::string coeff_str(const Rat& mag) {
  std::ostringstream os;
  os << mag;
  return os.str();
}
}  // namespace

std::string NumberFieldContext::elem_str(const QElem& e, const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    bool negative = e[k] < 0;
    Rat mag = negative ? Rat(-e[k]) : e[k];
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    if (k == 0) {
      os << coeff_str(mag);
    } else {
      if (mag != 1) os << coeff_str(mag) << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  if (first) return "0";
  return os.str();
}

std::string NumberFieldContext::elem_str(const Elem& e, const std::string& var) const {
  return elem_str(to_q(e), var);
}

// ===========================================================================
// Continued fractions
// ===========================================================================

Int PeriodicContinuedFraction::term(size_t k) const {
  if (k < preperiod.size()) return preperiod[k];
  if (period.empty()) throw internal_error("continued fraction term index out of range");
  return period[(k - preperiod.size()) % period.size()];
}

namespace {

PeriodicContinuedFraction rational_cf(Rat v) {
  PeriodicContinuedFraction cf;
  for (;;) {
    Int a = rat_floor(v);
    cf.preperiod.push_back(a);
    Rat frac = v - Rat(a);
    if (frac == 0) break;
    v = Rat(1) / frac;
  }
  return cf;
}

// Exact floor((P + sqrt(N)) / Q) for nonsquare N > 0 and Q != 0.
Int floor_P_sqrtN_Q(const Int& P, const Int& N, const Int& Q) {
  Int s = isqrt_floor(N);
  auto fdiv = [](const Int& a, const Int& b) {
    Int q = a / b;  // truncates toward zero
    Int r = a - q * b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
  };
  if (Q > 0) {
    Int t0 = fdiv(P + s, Q);
    // Try t0 + 1: valid iff Q*(t0+1) - P <= sqrt(N).
    Int w = Q * (t0 + 1) - P;
    if (w <= 0 || w * w < N) return t0 + 1;
    return t0;
  }
  // Q < 0: floor((P + sqrt(N)) / Q) = floor((-P - sqrt(N)) / |Q|).
  Int aq = -Q;
  Int t0 = fdiv(-P - s - 1, aq);
  // Try t0 + 1: valid iff |Q|*(t0+1) + P <= -sqrt(N).
  Int u = aq * (t0 + 1) + P;
  if (u <= 0 && u * u > N) return t0 + 1;
  return t0;
}

}  // namespace

PeriodicContinuedFraction surd_continued_fraction(const NumberFieldContext& ctx, const Elem& x,
                                                  int root_index) {
  int d = ctx.degree();
  if (d > 2) throw usage_error("continued fractions are supported for degree <= 2 only");
  if (!ctx.root_is_real(root_index)) throw usage_error("continued fraction requires a real root");
  if (d == 1) {
    Rat lam(-ctx.minpoly().c[0]);
    Rat acc = 0;
    for (size_t k = x.size(); k-- > 0;) acc = acc * lam + Rat(x[k]);
    return rational_cf(acc);
  }
  // Value is u + v * lambda with lambda = (-B + s*sqrt(D)) / 2.
  Int B = ctx.minpoly().c[1], C = ctx.minpoly().c[0];
  Int D = B * B - 4 * C;
  if (D <= 0) throw usage_error("designated root is not real");
  Int u = x[0], v = x[1];
  // Ascending root order: index of the smaller real root takes the minus sign.
  std::vector<int> reals = ctx.real_root_indices();
  int s = (root_index == reals.front()) ? -1 : 1;
  if (v == 0) return rational_cf(Rat(u));
  Int P = 2 * u - v * B;
  Int Q = 2;
  Int t = Int(s) * v;
  Int N = t * t * D;
  if (t < 0) {
    P = -P;
    Q = -Q;
  }
  if ((N - P * P) % Q != 0) {
    Int aq = Q < 0 ? Int(-Q) : Q;
    P *= aq;
    N *= aq * aq;
    Q *= aq;
  }
  PeriodicContinuedFraction cf;
  std::map<std::pair<Int, Int>, size_t> seen;
  std::vector<Int> terms;
  for (int guard = 0; guard < 100000; ++guard) {
    auto key = std::make_pair(P, Q);
    auto it = seen.find(key);
    if (it != seen.end()) {
      cf.preperiod.assign(terms.begin(), terms.begin() + it->second);
      cf.period.assign(terms.begin() + it->second, terms.end());
      return cf;
    }
    seen.emplace(key, terms.size());
    Int a = floor_P_sqrtN_Q(P, N, Q);
    terms.push_back(a);
    Int P2 = a * Q - P;
    Int Q2 = (N - P2 * P2) / Q;
    if (Q2 == 0) throw internal_error("surd recursion degenerated");
    P = P2;
    Q = Q2;
  }
  throw internal_error("continued fraction failed to close a period");
}

std::vector<Convergent> convergents(const PeriodicContinuedFraction& cf, size_t count) {
  size_t n = count;
  if (cf.period.empty()) n = std::min(n, cf.preperiod.size());
  std::vector<Convergent> out;
  Int pm1(1), pm2(0), qm1(0), qm2(1);
  for (size_t k = 0; k < n; ++k) {
    Int a = cf.term(k);
    Int p = a * pm1 + pm2;
    Int q = a * qm1 + qm2;
    out.push_back({p, q});
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  return out;
}

int distinct_real_roots_in(const IntPolynomial& p, const Rat& a, const Rat& b) {
  if (p.is_zero()) throw usage_error("root count of the zero polynomial");
  if (a >= b) return 0;
  if (p.eval(a) == 0 || p.eval(b) == 0)
    throw internal_error("distinct_real_roots_in requires nonvanishing endpoints");
  if (p.degree() == 0) return 0;
  std::vector<QPoly> chain = sturm_chain(p);
  return sturm_count(chain, a, b);
}

// ===========================================================================
// Logarithm enclosure
// ===========================================================================

namespace {
// atanh series: 2 * sum z^(2j+1)/(2j+1), plus a rigorous tail bound.
std::pair<Rat, Rat> atanh_twice_with_tail(const Rat& z, const Rat& tol) {
  Rat z2 = z * z;
  Rat term = z;
  Rat sum = 0;
  unsigned j = 0;
  for (;;) {
    sum += term / Rat(2 * j + 1);
    Rat tail = Rat(2) * term * z2 / (Rat(2 * j + 3) * (Rat(1) - z2));
    if (tail <= tol) return {Rat(2) * sum, tail};
    term *= z2;
    ++j;
    if (j > 100000) throw internal_error("logarithm series failed to converge");
  }
}
}  // namespace

RationalInterval log_interval(const Rat& x, const Rat& eps) {
  if (x <= 0) throw usage_error("logarithm of a nonpositive number");
  if (x == 1) return RationalInterval::point(Rat(0));
  if (x < 1) {
    RationalInterval v = log_interval(Rat(1) / x, eps);
    return -v;
  }
  Rat y = x;
  long k = 0;
  while (y >= 2) {
    y /= 2;
    ++k;
  }
  Rat tol = eps / Rat(4 * (k > 0 ? k : 1));
  Rat lo(0), hi(0);
  if (y > 1) {
    Rat z = (y - 1) / (y + 1);
    auto [s, tail] = atanh_twice_with_tail(z, tol);
    lo += s;
    hi += s + tail;
  }
  if (k > 0) {
    auto [l2, tail2] = atanh_twice_with_tail(Rat(1, 3), tol);
    lo += Rat(k) * l2;
    hi += Rat(k) * (l2 + tail2);
  }
  return RationalInterval(lo, hi);
}

}  // namespace fpx::algebra
