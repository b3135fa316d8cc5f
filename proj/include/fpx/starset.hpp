#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpx/algebra.hpp"

namespace fpx::starset {

// --- interpolation step ------------------------------------------------

// a + param*(b - a), exact; param defaults to the designated root.
// Operands must share the context's degree.
algebra::Elem star(const algebra::NumberFieldContext& ctx,
                   const algebra::Elem& a, const algebra::Elem& b);
algebra::Elem star(const algebra::NumberFieldContext& ctx,
                   const algebra::Elem& param, const algebra::Elem& a,
                   const algebra::Elem& b);
algebra::QElem star_q(const algebra::NumberFieldContext& ctx,
                      const algebra::QElem& a, const algebra::QElem& b);
algebra::QElem star_q(const algebra::NumberFieldContext& ctx,
                      const algebra::QElem& param, const algebra::QElem& a,
                      const algebra::QElem& b);
Rat star_rational(const Rat& param, const Rat& a, const Rat& b);

// --- ambient shape of the orbit closure ---------------------------------

// The space the full orbit closure fills when the orbit is convex: the unit
// interval for parameters in [0,1], the real line for other real parameters,
// the complex plane otherwise.
enum class ClosureShape { unit_interval, real_line, complex_plane };
const char* closure_shape_str(ClosureShape s);
ClosureShape closure_shape(const algebra::NumberFieldContext& ctx);
ClosureShape closure_shape_rational(const Rat& lambda);

// --- search budgets -------------------------------------------------------

struct SearchBudget {
  std::size_t max_points = 200000;  // settled / retained points
  Rat max_abs = Rat(1000000);       // numeric bound on explored |value|
  int max_depth = 16;               // interpolation rank
};

// --- point sets -------------------------------------------------------------

struct PointSet {
  std::vector<algebra::Elem> elements;  // lexicographically sorted, unique
  int rank_reached = 0;
  bool saturated = true;
};

bool point_set_contains(const PointSet& s, const algebra::Elem& x);

// Rank-stratified closure: level 0 is the seed set, level k+1 adds every
// pairwise interpolation of level k.  Stops early at a fixed point.  Throws
// budget_error naming the last completed level when max_points trips.
PointSet closure_rank(const algebra::NumberFieldContext& ctx,
                      const std::vector<algebra::Elem>& seed, int n,
                      const SearchBudget& budget = {}, int threads = 1);
PointSet closure_rank_with(const algebra::NumberFieldContext& ctx,
                           const algebra::Elem& param,
                           const std::vector<algebra::Elem>& seed, int n,
                           const SearchBudget& budget = {}, int threads = 1);
// Rational-coordinate variant (used by the affine-equivariance checks).
std::vector<algebra::QElem> closure_rank_q(
    const algebra::NumberFieldContext& ctx,
    const std::vector<algebra::QElem>& seed, int n,
    std::size_t max_points = 200000);

// --- windows ------------------------------------------------------------------

// Closed rational interval per windowed conjugate, aligned with
// real_unit_interval_indices() order.
struct Window {
  std::vector<std::pair<Rat, Rat>> bounds;
};

// [0,1] at every windowed conjugate.
Window unit_window(const algebra::NumberFieldContext& ctx);
// Outward rational hull of the seeds' conjugate values, per windowed index.
Window window_from_seeds(const algebra::NumberFieldContext& ctx,
                         const std::vector<algebra::Elem>& seed);
// Exact sign tests at every windowed conjugate.
bool window_contains(const algebra::NumberFieldContext& ctx, const Window& w,
                     const algebra::Elem& x);

// --- derivations -----------------------------------------------------------------

// One node of a replayable interpolation chain.  Base steps declare seed
// values; star steps reference earlier ids.
struct DerivationStep {
  std::string id;
  bool base = false;
  std::string left, right;  // empty for base steps
  algebra::Elem value;
};

struct Derivation {
  algebra::QElem param;               // interpolation weight
  std::vector<DerivationStep> steps;  // topologically ordered
  std::string target;                 // id of the derived point
};

// Recomputes every step exactly and returns the target's value.  Throws
// Error(verify) naming the first failing step.
algebra::Elem replay_derivation(const algebra::NumberFieldContext& ctx,
                                const Derivation& d);

// --- region saturation -------------------------------------------------------------

struct SaturationResult {
  PointSet points;
  Derivation chain;  // every returned point appears as a step
};

// Fixed-point interpolation closure keeping a new point only when it lies
// inside the window (when given) and |value| <= radius.  Seeds are retained
// unconditionally.  Membership of every returned point is certified by the
// chain; completeness is not claimed in general.  Budget exhaustion returns
// the partial set with saturated = false instead of throwing.  Window
// pruning requires a strong PV parameter (that containment is what makes
// the pruning sound).
SaturationResult saturate_region(const algebra::NumberFieldContext& ctx,
                                 const std::vector<algebra::Elem>& seed,
                                 const std::optional<Window>& window,
                                 const Rat& radius,
                                 const SearchBudget& budget = {});

// --- derivation search ----------------------------------------------------------------

struct SearchStats {
  std::size_t settled = 0;
  int depth = 0;           // rank of the found target (0 when not found)
  bool exhausted = false;  // frontier emptied with budget to spare
};

// Best-first search for an interpolation chain deriving target from the
// seeds; points with small numeric |value| settle first, ties resolved by
// parent indices so runs are deterministic.  Empty result means not found
// within budget, which is never a non-membership proof.
std::optional<Derivation> derivation_search(
    const algebra::NumberFieldContext& ctx, const algebra::Elem& target,
    const std::vector<algebra::Elem>& seed, const SearchBudget& budget = {},
    SearchStats* stats = nullptr);
std::optional<Derivation> derivation_search_with(
    const algebra::NumberFieldContext& ctx, const algebra::Elem& param,
    const algebra::Elem& target, const std::vector<algebra::Elem>& seed,
    const SearchBudget& budget = {}, SearchStats* stats = nullptr);

// --- convexity witness --------------------------------------------------------------------

// A pair of orbit points at distance strictly inside (0,1) certifies a
// convex (dense) orbit closure, pinning its shape.  convex: immediate from
// the parameter's region (pair recorded when one exists trivially).
// witness_found: pair discovered by candidate probes or the rank sweep.
struct ConvexityVerdict {
  enum class Kind { convex, witness_found, unknown_at_budget } kind =
      Kind::unknown_at_budget;
  std::optional<ClosureShape> shape;  // set unless unknown
  std::optional<std::pair<algebra::Elem, algebra::Elem>> witness;
  std::optional<std::pair<Rat, Rat>> witness_rational;
};

ConvexityVerdict convexity_witness(const algebra::NumberFieldContext& ctx,
                                   const SearchBudget& budget = {});
ConvexityVerdict convexity_witness_rational(const Rat& lambda,
                                            const SearchBudget& budget = {});

}  // namespace fpx::starset
