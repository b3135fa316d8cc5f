#pragma once

#include <cstddef>
#include <vector>

#include "fpx/algebra.hpp"
#include "fpx/starset.hpp"

// Cut-and-project model sets: exact window membership, in-ball enumeration,
// arithmetic-progression slicing, scheme matrices, and the congruence
// superset for integer parameters.
namespace fpx::modelset {

// A model set over a strong PV context: per windowed conjugate index, a
// closed interval whose endpoints are exact ring elements (their images at
// that conjugate are the bounds). `hull` carries outer rational enclosures
// of the same intervals for serialization and coarse pruning; all
// membership decisions go through the exact endpoints.
struct ModelSetSpec {
  algebra::NumberFieldContext ctx;
  std::vector<algebra::Elem> lo, hi;  // one per entry of real_unit_interval_indices
  starset::Window hull;
};

// The [0,1] window on every conjugate coordinate.
ModelSetSpec unit_spec(const algebra::NumberFieldContext& ctx);

// Window spanned by the conjugate images of a finite seed: per coordinate
// the exact min and max over the seed. Endpoints may be irrational; they
// stay exact as ring elements.
ModelSetSpec spec_from_seed(const algebra::NumberFieldContext& ctx,
                            const std::vector<algebra::Elem>& seed);

// Closed-interval test on every windowed conjugate, decided by exact signs.
bool member(const ModelSetSpec& spec, const algebra::Elem& x);

// All members with |value| <= radius. Real quadratic contexts take a direct
// scan over the second coordinate; everything else goes through the lattice
// path below. Output is sorted by coordinates.
starset::PointSet enumerate_radius(const ModelSetSpec& spec, const Rat& radius,
                                   int threads = 1);

// General enumeration: trailing coordinates are boxed via an interval
// inverse of the conjugate Vandermonde system, the leading coordinate is
// pinned by the window, and every candidate passes the exact member and
// radius tests. Works for any degree; exposed separately so the quadratic
// scan can be checked against it.
starset::PointSet enumerate_radius_lattice(const ModelSetSpec& spec,
                                           const Rat& radius, int threads = 1);

// The finite set of integers j with x + j*d in the model set. Requires a
// nontrivial strong PV parameter and d != 0; the result is a contiguous
// (possibly empty) run returned in increasing order.
std::vector<Int> ap_intersection(const ModelSetSpec& spec,
                                 const algebra::Elem& x,
                                 const algebra::Elem& d);

// Companion matrix of the minimal polynomial together with the conjugate
// Vandermonde rows (windowed conjugates first, then the designated root,
// then the rest) and the matching diagonal. Construction verifies
// V * companion = diag * V: exactly at the element level, and entrywise to
// interval precision per root.
struct SchemeMatrices {
  std::vector<std::vector<Int>> companion;
  std::vector<int> row_roots;  // root index of each Vandermonde row
  std::vector<std::vector<algebra::ComplexBox>> vandermonde;
  std::vector<algebra::ComplexBox> diagonal;
  std::size_t injectivity_samples = 0;  // lattice vectors spot-checked
  bool injective_on_samples = true;
};

SchemeMatrices build_scheme(const algebra::NumberFieldContext& ctx);

// Integer parameters m >= 2: membership in the congruence superset
// m(m-1)Z + {0, 1, m, 1-m}, i.e. n = 0 or 1 both mod m and mod m-1.
bool integer_superset_member(const Int& lambda_int, const Int& n);

// Ascending order by the designated-root value (real contexts only).
std::vector<algebra::Elem> sorted_by_value(const algebra::NumberFieldContext& ctx,
                                           std::vector<algebra::Elem> pts);

}  // namespace fpx::modelset
