#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fpx/algebra.hpp"

// The interpolation closure of {0, 1} inside Z[x]: the star operation lifted
// to polynomials, conversion to the interpolation basis x^k (1-x)^(n-k),
// an exact membership decision with small certificates, enumeration of the
// closure by level, Hoeffding threshold approximants, and a bounded census
// of members by degree and coefficient size.
namespace fpx::qpoly {

using algebra::IntPolynomial;

// Exact binomial coefficient, 0 outside 0 <= k <= n.
Int binomial(int n, int k);

// (1 - x) s + x t.  Evaluation at any point commutes with the pointwise star.
IntPolynomial star_x(const IntPolynomial& s, const IntPolynomial& t);

// Coordinates of a polynomial in the level-n basis x^k (1-x)^(n-k),
// k = 0..n.  The basis is triangular over the standard one, so coordinates
// are exact and integral for integer input.
struct StarBasis {
  int n = 0;
  std::vector<Rat> coeffs;  // f_0 .. f_n
};

// Requires n >= deg f (usage error otherwise).  Round-trips exactly.
StarBasis to_star_basis(const IntPolynomial& f, int n);
// Expands the basis combination back to standard form.  The coordinates must
// be integral (usage error otherwise); integer combinations stay in Z[x].
IntPolynomial from_star_basis(const StarBasis& b);

// Verdict of the exact membership decision.  A member carries the least
// level n whose basis coordinates sit inside [0, C(n,k)], along with those
// coordinates as the certificate.  A non-member carries a rational point
// whose value leaves the open unit interval (points 0 and 1 flag endpoint
// violations), or, when the only violation is a tangency at an irrational
// critical point, an isolating interval for a root of f (value 0 attained)
// or of f - 1 (value 1 attained, touches_one set).
struct MembershipVerdict {
  bool member = false;
  int witness_level = -1;
  std::vector<Int> level_coeffs;
  std::optional<Rat> witness_point;
  std::optional<Rat> witness_value;
  std::optional<std::pair<Rat, Rat>> root_interval;
  bool touches_one = false;
};

// Decides membership in the closure of {0, 1} under the polynomial star.
// The constants 0 and 1 are members at level 0.  Everything else must take
// values in {0, 1} at both endpoints and stay strictly inside (0, 1) on the
// open interval; the range check isolates the real critical points in (0, 1)
// and sign-tests f there exactly.  Total: never throws on polynomial input.
MembershipVerdict membership(const IntPolynomial& f);

// Exact number of level-n members: the product of (1 + C(n,k)) over k.
Int level_count(int n);

// Every level-n member: all combinations b_k x^k (1-x)^(n-k) with integer
// 0 <= b_k <= C(n,k), in standard form, sorted by coefficient vector.
// Distinct coordinate vectors give distinct polynomials, so the result has
// exactly level_count(n) entries.  Throws budget error if that exceeds limit.
std::vector<IntPolynomial> enumerate_level(int n, std::size_t limit = 100000);

// Level of the Hoeffding threshold approximant: ceil(-ln(eps) / (2 eps^2)),
// with the logarithm enclosed rigorously.  Requires 0 < eps < 1.
int threshold_level(const Rat& eps);

// Partial binomial sum t(x) = sum of C(n,i) x^i (1-x)^(n-i) over
// i <= floor(gamma * n) at level n = threshold_level(eps).  Approximates the
// indicator of x < gamma: at least 1 - eps on [0, gamma - eps] and at most
// eps on [gamma + eps, 1].  A member by construction.  Requires gamma and
// eps strictly inside (0, 1).
IntPolynomial threshold_poly(const Rat& gamma, const Rat& eps);

// All members of degree at most max_degree whose standard coefficients are
// bounded by coeff_bound in absolute value, sorted by coefficient vector.
// Throws budget error when the candidate grid exceeds limit.
std::vector<IntPolynomial> census(int max_degree, const Int& coeff_bound,
                                  std::size_t limit = 200000);

}  // namespace fpx::qpoly
