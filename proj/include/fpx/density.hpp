#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fpx/algebra.hpp"
#include "fpx/modelset.hpp"
#include "fpx/starset.hpp"

// Relative-density machinery for model sets over a single-window strong PV
// context: covering seed sets whose conjugate images blanket [0,1], the
// norm bound M with its seed ball Y, reductions of far points down to Y by
// division through a contracting unit, and the replication shortcut for the
// families where the model set equals the interpolation closure.
namespace fpx::density {

// Continued-fraction convergents of the windowed image of the parameter,
// with the signed remainders eta_k = (-1)^k (q_k*lambda - p_k) kept as ring
// elements.  Their windowed images are positive, strictly decreasing from
// k = 1 on, and pinched between 1/q_{k+2} and 1/q_{k+1}.
struct ConvergentTable {
  std::vector<Int> a;                // partial quotients, a[0] = 0
  std::vector<Int> p, q;             // convergent numerators and denominators
  std::vector<algebra::Elem> eta;    // eta[k], aligned with a/p/q
};

ConvergentTable convergent_table(const algebra::NumberFieldContext& ctx,
                                 std::size_t count);

// A finite subset X of the model set whose scaled conjugate intervals
// [(1-beta)x', (1-beta)x' + beta] cover [0,1], where beta is the windowed
// image of the contracting unit alpha.  Both endpoints 0 and 1 are always
// present and every adjacent gap is certified by an exact sign test.
struct CoverSet {
  algebra::Elem alpha;                // unit with windowed image in (0,1)
  std::vector<algebra::Elem> points;  // sorted by windowed image; 0 first, 1 last
  std::size_t gap_checks = 0;         // adjacent-overlap comparisons that passed

  // Centered-window construction data; cf_k stays -1 for covers not built
  // from the convergent table (greedy, explicit, or the beta >= 1/2 shortcut).
  long cf_k = -1;
  Int q_k{0};
  long n = 0;  // multiplier count minus one (q_k - 1)
  long m = 0;  // lower end of the multiplier range

  // bound_elem is the cover point at the lower end b = m of the multiplier
  // range; max_elem is the true norm maximum over the cover.  For a
  // negative parameter and even n the upper end exceeds the lower by
  // exactly 1, so the two differ; the seed plan always uses max_elem.
  algebra::Elem bound_elem;
  algebra::Elem max_elem;
};

// Cover for a real quadratic context via the convergent table: the least k
// whose consecutive remainders satisfy eta_k + eta_{k-1} <= beta/(1-beta)
// fixes n = q_k - 1, the multiplier range is centered at -n/2, and the
// points are ceil(b*mu) - b*lambda.  Short-circuits to {0,1} when
// beta >= 1/2.  alpha must be a unit with windowed image in (0,1).
CoverSet cover_set_quadratic(const algebra::NumberFieldContext& ctx,
                             const algebra::Elem& alpha);

// Cover assembled greedily from the model-set points of |value| <= radius:
// sweep [0,1] left to right, always stepping to the admissible point whose
// interval reaches furthest.  Throws budget_error when the pool cannot
// close a gap (enlarge the radius and retry).
CoverSet cover_set_greedy(const modelset::ModelSetSpec& spec,
                          const algebra::Elem& alpha, const Rat& radius);

// Wraps an explicit point list as a cover, verifying the endpoints, window
// membership, and every gap.
CoverSet cover_set_from_points(const algebra::NumberFieldContext& ctx,
                               const algebra::Elem& alpha,
                               const std::vector<algebra::Elem>& points);

// M = (|alpha - 1| / (|alpha| - 1)) * max |x| over the cover, and the seed
// ball Y of all model-set points with |y| <= M.  For a real parameter M is
// carried exactly in the field; otherwise as a rigorous enclosure.
struct SeedPlan {
  CoverSet cover;
  std::optional<algebra::QElem> bound_exact;
  algebra::RationalInterval bound;
  starset::PointSet seeds;  // Y, sorted by coordinates
};

SeedPlan seed_plan(const modelset::ModelSetSpec& spec, CoverSet cover);

// Reduces a model-set member z to the seed ball: while z lies outside Y,
// pick the covering x (smallest norm, then lexicographic), replace z by
// x interpolated toward z with weight 1/alpha, and record the inverse step.
// Every step is verified to stay in the model set and to strictly decrease
// the norm.  The result replays through starset::replay_derivation with
// parameter alpha to the original z; a z already in Y yields a single base
// step.
starset::Derivation reduce_to_seed(const modelset::ModelSetSpec& spec,
                                   const SeedPlan& plan,
                                   const algebra::Elem& z);

// The base points that replication reduces to: {0, 1, lambda, 1-lambda},
// plus the fifth point 1 - 2*lambda* (the image of 0 under right-
// extrapolation by the golden-case parameter) for the golden family.
std::vector<algebra::Elem> replication_base(
    const algebra::NumberFieldContext& ctx);

// Reduction for the three families whose model set is closed under the
// four one-sided extrapolations by 0 and 1 (golden, silver, and the
// 1+sqrt(3) pair, in either orientation of lambda vs 1-lambda).  Peels z
// with the inverse extrapolation picked by the windowed image band; the
// middle band (present when the normalized parameter has image > 1/2)
// chooses left-extrapolation by the residue of z modulo that parameter.
// The derivation replays to z with the normalized parameter as weight.
starset::Derivation replication_reduce(const algebra::NumberFieldContext& ctx,
                                       const algebra::Elem& z);

// Enumeration bounds for cubic contexts with a complex designated root:
// every model-set point a + b*lambda + c*lambda^2 with |value| <= M has
// |b| <= r(M+1) / (y|mu - lambda|) and |c| <= (M+1) / (y|mu - lambda|),
// where mu is the windowed root, y = |Im lambda|, and r is the larger of
// |mu + lambda| and sqrt(mu^2 + y^2) (the sharp factor is the first; any
// larger r only widens the truncation, so the pair stays valid).
std::pair<algebra::RationalInterval, algebra::RationalInterval>
cubic_coefficient_bounds(const algebra::NumberFieldContext& ctx,
                         const algebra::RationalInterval& m_bound);

}  // namespace fpx::density
