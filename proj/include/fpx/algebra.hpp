#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpx/error.hpp"

namespace fpx {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

Int rat_floor(const Rat& x);
Int rat_ceil(const Rat& x);
Int isqrt_floor(const Int& n);  // requires n >= 0
double rat_to_double(const Rat& x);

}  // namespace fpx

namespace fpx::algebra {

// ---------------------------------------------------------------------------
// Integer polynomials, lowest-degree coefficient first.
// Invariant: no trailing zero coefficients; the zero polynomial is {}.
// ---------------------------------------------------------------------------
struct IntPolynomial {
  std::vector<Int> c;

  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Int> coeffs);

  static IntPolynomial zero() { return IntPolynomial(); }
  static IntPolynomial constant(Int v);
  static IntPolynomial x();
  // Accepts e.g. "x^2+3x-1", with optional spaces and unary signs.
  static IntPolynomial parse(const std::string& text);

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  const Int& leading() const;
  Int constant_term() const { return c.empty() ? Int(0) : c.front(); }

  IntPolynomial derivative() const;
  Rat eval(const Rat& t) const;
  Int eval_int(const Int& t) const;

  void normalize();
  std::string str(const std::string& var = "x") const;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c == b.c; }
};

// Quotient and remainder of a by monic b.  Exact integer arithmetic.
std::pair<IntPolynomial, IntPolynomial> divmod_monic(const IntPolynomial& a, const IntPolynomial& b);

// p(q(x)) by Horner over polynomials.
IntPolynomial compose(const IntPolynomial& p, const IntPolynomial& q);

// x^deg * p(1/x): coefficient reversal, trailing zeros of p become leading.
IntPolynomial reversed(const IntPolynomial& p);

// m-th cyclotomic polynomial, by recursive division of x^m - 1.
IntPolynomial cyclotomic_polynomial(int m);

// Euler totient, used for cyclotomic degrees.
int euler_phi(int m);

// ---------------------------------------------------------------------------
// Exact rational intervals and complex boxes.
// ---------------------------------------------------------------------------
struct RationalInterval {
  Rat lo, hi;

  RationalInterval() : lo(0), hi(0) {}
  RationalInterval(Rat l, Rat h);
  static RationalInterval point(const Rat& v) { return RationalInterval(v, v); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
  // Sign of every point in the interval; nullopt when the interval straddles 0.
  std::optional<int> sign() const;

  RationalInterval operator-() const { return RationalInterval(-hi, -lo); }
  friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
  friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
  friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
  // Requires the divisor to exclude zero.
  friend RationalInterval operator/(const RationalInterval& a, const RationalInterval& b);

  RationalInterval square() const;
  // Outward rounding to denominators 2^bits; bounds rational bit growth.
  RationalInterval round_out(unsigned bits) const;
};

struct ComplexBox {
  RationalInterval re, im;

  ComplexBox() = default;
  ComplexBox(RationalInterval r, RationalInterval i) : re(std::move(r)), im(std::move(i)) {}
  static ComplexBox point(const Rat& r, const Rat& i);

  bool is_real_line() const { return im.lo == 0 && im.hi == 0; }
  ComplexBox conj() const { return ComplexBox(re, -im); }
  RationalInterval abs_square() const { return re.square() + im.square(); }
  Rat max_width() const;

  friend ComplexBox operator+(const ComplexBox& a, const ComplexBox& b);
  friend ComplexBox operator-(const ComplexBox& a, const ComplexBox& b);
  friend ComplexBox operator*(const ComplexBox& a, const ComplexBox& b);
  friend ComplexBox operator/(const ComplexBox& a, const ComplexBox& b);

  ComplexBox round_out(unsigned bits) const;
};

struct RootBox {
  bool real = true;
  RationalInterval x;  // real part (the whole enclosure for real roots)
  RationalInterval y;  // imaginary part; [0,0] for real roots
  ComplexBox box() const { return ComplexBox(x, y); }
};

// ---------------------------------------------------------------------------
// Number field context: a monic irreducible integer polynomial together with
// isolated enclosures for all of its roots and a designated root ("lambda").
// Elements are integer (or rational) coordinate vectors in the power basis.
// ---------------------------------------------------------------------------
using Elem = std::vector<Int>;
using QElem = std::vector<Rat>;

class NumberFieldContext {
public:
  // Throws on non-monic, reducible, or out-of-range input.  The hint picks
  // the designated root (nearest enclosure); without a hint the root of
  // largest modulus is designated (canonical tie-break).
  static NumberFieldContext make(const IntPolynomial& p,
                                 std::optional<std::pair<double, double>> root_hint = {});

  int degree() const;
  const IntPolynomial& minpoly() const;
  int lambda_index() const;
  bool lambda_is_real() const;
  int root_count() const;
  bool root_is_real(int i) const;
  // Partner index under complex conjugation (i itself for real roots).
  int conjugate_index(int i) const;
  std::vector<int> real_root_indices() const;
  // Real roots strictly inside (0,1): the windowed conjugates.
  std::vector<int> real_unit_interval_indices() const;

  RootBox root_enclosure(int i, const Rat& eps) const;

  // --- element construction ---
  Elem zero() const;
  Elem one() const;
  Elem lambda() const;
  Elem from_int(const Int& v) const;
  QElem to_q(const Elem& e) const;
  static bool is_int_elem(const QElem& e);
  Elem to_elem(const QElem& e) const;  // throws if not integral

  // --- exact ring arithmetic (coordinates in the power basis) ---
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem mul_lambda(const Elem& a) const;
  Elem mul_int(const Elem& a, const Int& k) const;
  Elem pow(const Elem& a, unsigned e) const;
  QElem qadd(const QElem& a, const QElem& b) const;
  QElem qsub(const QElem& a, const QElem& b) const;
  QElem qmul(const QElem& a, const QElem& b) const;
  QElem qscale(const QElem& a, const Rat& k) const;
  QElem qinverse(const QElem& a) const;  // extended gcd against the minimal polynomial
  // Exact division in Z[lambda]; false if the quotient is not integral.
  bool divide(const Elem& a, const Elem& b, Elem& out) const;
  Int norm(const Elem& a) const;  // determinant of the multiplication matrix
  // Characteristic polynomial of multiplication by a (monic, degree d).
  IntPolynomial element_charpoly(const Elem& a) const;

  // --- exact numerics ---
  // Enclosure of the value of e at root i, refined until width <= eps.
  ComplexBox value_box(const QElem& e, int i, const Rat& eps) const;
  ComplexBox value_box(const Elem& e, int i, const Rat& eps) const;
  // Exact sign of the value of e at a real root (refines until decided;
  // the value is zero exactly when the coordinate vector is zero).
  int sign_at(const QElem& e, int i) const;
  int sign_at(const Elem& e, int i) const;
  // Compare |value at lambda| against rational r.  Exact for real lambda;
  // for complex lambda refinement is capped and ties report 0.
  int cmp_abs_lambda(const Elem& e, const Rat& r) const;
  RationalInterval abs_lambda(const Elem& e, const Rat& eps) const;
  double approx_at(const QElem& e, int i, bool imag_part = false) const;
  // Exact floor/ceil of the value of e at a real root.  Values of
  // non-constant elements are irrational, so refinement terminates.
  Int floor_value(const QElem& e, int i) const;
  Int ceil_value(const QElem& e, int i) const;
  Int floor_value(const Elem& e, int i) const;
  Int ceil_value(const Elem& e, int i) const;

  std::string elem_str(const Elem& e, const std::string& var = "lambda") const;
  std::string elem_str(const QElem& e, const std::string& var = "lambda") const;

  bool operator==(const NumberFieldContext& o) const { return minpoly() == o.minpoly() && lambda_index() == o.lambda_index(); }

private:
  struct State;
  std::shared_ptr<State> s_;
  NumberFieldContext() = default;
};

// ---------------------------------------------------------------------------
// Continued fractions of real quadratic surds (exact, periodic).
// ---------------------------------------------------------------------------
struct PeriodicContinuedFraction {
  std::vector<Int> preperiod;
  std::vector<Int> period;  // empty iff the value is rational

  Int term(size_t k) const;
  size_t preperiod_length() const { return preperiod.size(); }
  size_t period_length() const { return period.size(); }
};

// CF of the value of x at a real root of a degree-<=2 context.
PeriodicContinuedFraction surd_continued_fraction(const NumberFieldContext& ctx, const Elem& x,
                                                  int root_index);

struct Convergent {
  Int p, q;
};
// First `count` convergents p_k/q_k, k = 0..count-1.
std::vector<Convergent> convergents(const PeriodicContinuedFraction& cf, size_t count);

// Number of distinct real roots of p in the open interval (a, b).
// Requires p(a) != 0 and p(b) != 0; p need not be squarefree.
int distinct_real_roots_in(const IntPolynomial& p, const Rat& a, const Rat& b);

// Rigorous natural logarithm enclosure for rational x > 0.
RationalInterval log_interval(const Rat& x, const Rat& eps);

// Outward square-root enclosure of a nonnegative interval, dyadic at 2^-bits.
RationalInterval sqrt_outer(const RationalInterval& v, unsigned bits);

}  // namespace fpx::algebra
