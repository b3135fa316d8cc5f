#pragma once

#include <string>
#include <vector>

#include "fpx/algebra.hpp"
#include "fpx/starset.hpp"

namespace fpx::emit {

// Decimal shadow with 17 significant digits (round-trips a double).
std::string shadow_str(double v);

// Midpoint of a rigorous enclosure of width at most 2^-48 at the designated
// root. Shadows annotate output rows; decisions are never based on them.
std::pair<double, double> shadow_of(const algebra::NumberFieldContext& ctx,
                                    const algebra::Elem& e);

// Writes through a temp file in the same directory plus rename, so a reader
// never sees a partial file. Throws Error(usage) on I/O failure.
void write_atomic(const std::string& path, const std::string& content);

// Header coords_0,...,coords_{d-1},re,im; one row per point in input order,
// exact integer coordinates followed by their decimal shadows.
std::string point_set_csv(const algebra::NumberFieldContext& ctx,
                          const std::vector<algebra::Elem>& points);

// One circle per point in input order, marker radius 0.18 world units,
// viewBox padded by 5% of the span per side. The y axis is flipped so
// positive imaginary parts point up.
std::string point_set_svg(const algebra::NumberFieldContext& ctx,
                          const std::vector<algebra::Elem>& points);

// {"schema":"fpx.pointset/1",...}: exact coordinates as decimal strings with
// shadows alongside.
std::string point_set_json(const algebra::NumberFieldContext& ctx,
                           const std::vector<algebra::Elem>& points);

// {"schema":"fpx.window/1","intervals":[{"lo":...,"hi":...},...]}, exact
// rationals as strings.
std::string window_json(const starset::Window& w);

// A derivation file: the field, the weight, and a replayable step list.
struct DerivationFile {
  algebra::IntPolynomial minpoly;  // zero when the file did not name a field
  starset::Derivation derivation;
};

// {"schema":"fpx.derivation/1","minpoly",...,"steps":[...]}. Every step
// records its exact coordinates; star steps name earlier ids, and replay
// re-checks each recorded value.
std::string derivation_json(const algebra::IntPolynomial& minpoly,
                            const starset::Derivation& d);

// Accepts the schema above, or a bare step array (field and weight must then
// come from elsewhere; the target defaults to the last step). Validates ids,
// step shape, and number syntax; throws Error(usage) naming the offender.
DerivationFile parse_derivation(const std::string& text);

}  // namespace fpx::emit
