#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpx/algebra.hpp"

namespace fpx::spv {

enum class Verdict { spv_trivial, spv_nontrivial, not_spv };

std::string verdict_str(Verdict v);

// Result of testing a candidate number against the windowed-conjugate
// condition: every Galois conjugate other than the number itself and its
// complex conjugate must be real and lie strictly inside (0, 1).
struct Classification {
  Verdict verdict = Verdict::not_spv;
  int k = 0;  // number of conjugates inside the window
  algebra::IntPolynomial minpoly;
  bool integral = true;  // monic minimal polynomial over Z
  std::optional<algebra::NumberFieldContext> ctx;
  double lambda_re = 0.0, lambda_im = 0.0;
  std::vector<double> window_values;
};

// Classify by minimal polynomial.  The hint designates the intended root;
// without one the root of largest modulus is designated.  Non-monic input
// (after removing integer content) is not an algebraic integer.
Classification classify(const algebra::IntPolynomial& p,
                        std::optional<std::pair<double, double>> hint = {});

// Classify an exact rational value.
Classification classify_rational(const Rat& value);

// The quadratic family x^2 + m x - n with 0 < n <= m, designating the
// negative root.  Every member has its other root inside (0, 1).
struct QuadraticFamilyEntry {
  Int m, n;
  Classification cls;
  double lambda_value = 0.0;
};
QuadraticFamilyEntry quadratic_family(const Int& m, const Int& n);

// Sign-pattern tests for monic integer cubics x^3 + a x^2 + b x + c.
// nonreal mode: c < 0, a+b+c >= 0, disc < 0 (one window root, complex pair).
// real-least mode: c > 0, a+b+c >= 0, -2a-3 < b < 0, disc > 0
//                  (all roots real, least root designated, two in window).
struct CubicCriterion {
  bool nonreal_mode = false;
  bool real_least_mode = false;
  Int discriminant;
  std::optional<Classification> cls;  // present when a mode matched
};
CubicCriterion cubic_criterion(const Int& a, const Int& b, const Int& c);

// The family lambda_n = 1 / (2 - 2 cos(pi/n)).
struct LambdaN {
  int n = 0;
  algebra::IntPolynomial minpoly;  // primitive, positive leading coefficient
  bool integral = false;
  Verdict verdict = Verdict::not_spv;
  int k = -1;  // -1 when the residue test decided without a field context
  double value = 0.0;
  bool used_window_lemma = false;
  std::vector<int> violating_residues;
};
LambdaN lambda_n(int n);

// Residue-window test deciding the windowed-conjugate condition for odd n:
// no unit j mod n may satisfy n <= 3j <= 2n unless j = (n-1)/2 or (n+1)/2.
bool lambda_n_window_test(int n, std::vector<int>* violations = nullptr);

// All odd n in [lo, hi] passing the residue-window test.
std::vector<int> lambda_n_spv_sweep(int lo, int hi);

// Smallest unit > 1 of norm +1 in Z[lambda] for a real quadratic context.
algebra::Elem fundamental_unit(const algebra::NumberFieldContext& ctx);

}  // namespace fpx::spv
