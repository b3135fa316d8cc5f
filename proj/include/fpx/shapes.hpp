#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fpx/algebra.hpp"
#include "fpx/modelset.hpp"
#include "fpx/starset.hpp"

// Planar interpolation closures over cyclotomic integer rings: regular
// polygon seeds, the distinguished parameters attached to them, projections
// onto axis directions, and exact pairwise-distance statistics.
namespace fpx::shapes {

// Z[zeta_m] with the designated root pinned to e^{2*pi*i/m}.  Elements use
// the power basis of the m-th cyclotomic polynomial (degree phi(m)).
struct CyclotomicContext {
  int order = 0;
  algebra::NumberFieldContext field;
};

// order >= 3; phi(order) is capped at 16 (budget_error beyond).
CyclotomicContext cyclotomic_context(int order);

// Complex conjugation as the ring automorphism zeta -> zeta^(order-1).
// Exact; fixed points are exactly the real-valued elements.
algebra::Elem conjugate(const CyclotomicContext& ctx, const algebra::Elem& e);

// Midpoint of a rigorous value enclosure at the designated root, for
// plotting and coarse filters.  Width below 1e-12; never used for decisions.
std::pair<double, double> shadow(const CyclotomicContext& ctx,
                                 const algebra::Elem& e);

// A finite planar point set together with the seed it grew from.  Closure
// results keep `seed` verbatim (polygon seeds stay in boundary order);
// `elements` is sorted by coordinates and duplicate-free.
struct PlanarSet {
  CyclotomicContext ctx;
  std::vector<algebra::Elem> seed;
  std::vector<algebra::Elem> elements;
  int rank_reached = 0;
  bool saturated = true;
};

// Vertices of the regular n-gon built on [0, 1]: partial sums
// sum_{j<l} omega^j for 0 <= l < n, omega = e^{2*pi*i/n}, so the polygon
// sits in the upper half-plane with its base on the real axis.  `order`
// selects the ambient ring (default n; must be a multiple of n).
PlanarSet polygon_vertices(int n, int order = 0);

// The inverse of 2*(1 - cos(pi/n)) as an exact ring element: the smallest
// parameter whose closure keeps the n-gon's vertex set locked (n >= 3).
// Requires order divisible by 2n, or by n when n is odd.  usage_error when
// the value is not an algebraic integer (n = 4) or the order is
// incompatible.
algebra::Elem lambda_element(const CyclotomicContext& ctx, int n);

// Exact classification of that parameter without constructing a context.
struct PolygonLambda {
  int n = 0;
  algebra::IntPolynomial minpoly;  // primitive, positive leading coefficient
  double approx = 0.0;             // floating-point value, informational
  bool spv = false;                // algebraic integer with all other
                                   // conjugates real in (0, 1)
};

// Minimal polynomial via the characteristic polynomial of multiplication
// in Z[zeta], exact for any n >= 3 with phi(2n) <= 16.  Non-monic results
// (n = 4) report spv = false: the parameter is not an algebraic integer.
PolygonLambda polygon_lambda(int n);

// Integer-arithmetic strong PV test for odd n >= 3: true exactly when no
// unit j of Z_n with n/3 <= j <= 2n/3 exists besides (n +- 1)/2.  Agrees
// with polygon_lambda().spv and covers the sweep range cheaply.
bool lambda_is_spv(int n);

// Rank-stratified interpolation closure of `seed.seed` under the given
// weight: level k+1 adds a + param*(b - a) over ordered pairs of the level-k
// set, keeping a point only when |value| <= budget.max_abs (ties kept).
// Pruned points never seed later levels, so the result is a certified
// subset of the full closure; `saturated` reports whether a fixed point was
// reached within `rank`.  budget_error when max_points trips.
PlanarSet planar_closure(const PlanarSet& seed, const algebra::Elem& param,
                         int rank, const starset::SearchBudget& budget = {});

// Outcome of projecting a planar set onto an axis direction and testing
// every projection against the cut-and-project window spanned by the
// projected seed.
struct ProjectionReport {
  bool pass = false;
  std::size_t checked = 0;
  // Points whose projection has no coordinates over the parameter's field.
  std::vector<algebra::Elem> outside_field;
  // Points whose projection escapes the seed window at some conjugate.
  std::vector<algebra::Elem> outside_window;
  algebra::IntPolynomial field_minpoly;  // of the projection coordinate field
  modelset::ModelSetSpec window;         // the scaled seed window used
  Int scale = 1;  // common denominator applied to all coordinates
};

// Projects every element onto the line spanned by `direction` (any nonzero
// ring element; the projection of z is z*conj(u) + conj(z)*u, an exact real
// element), rewrites the values in the power basis of `param`'s field, and
// checks them against the window spanned by the projected seed.  Requires a
// real parameter.  The containment is a theorem only for strong PV
// parameters; the report is descriptive either way.
ProjectionReport axis_projection_check(const PlanarSet& set,
                                       const algebra::Elem& param,
                                       const algebra::Elem& direction);

// Exact pairwise-distance summary.  Squared distances are ring elements
// (z - w times its conjugate); the minimum and all ties are certified by
// exact comparisons, with floating-point shadows used only to shortlist
// candidate pairs under a rigorously slack margin.
struct DistanceStats {
  algebra::Elem min_square;  // exact squared minimum distance
  bool min_is_one = false;   // min_square equals the ring's one
  algebra::RationalInterval min_distance;  // rigorous enclosure of the root
  // Unordered pairs attaining the minimum, each (a, b) with a < b, sorted.
  std::vector<std::pair<algebra::Elem, algebra::Elem>> attaining;
  // Distinct squared distances up to `histogram_radius`, ascending, with
  // pair counts; truncated to the entry cap.
  std::vector<std::pair<algebra::Elem, std::size_t>> histogram;
  bool histogram_truncated = false;
};

// usage_error on fewer than two points.  Histogram covers pair distances
// up to `histogram_radius` (at most `histogram_entries` distinct values).
DistanceStats distance_stats(const PlanarSet& set,
                             double histogram_radius = 4.0,
                             std::size_t histogram_entries = 64);

}  // namespace fpx::shapes
