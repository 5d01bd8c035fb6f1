#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "dpnls/params.hpp"

namespace dpnls {

// Monic root polynomial G^4 + c3 G^3 + c2 G^2 + c1 G + c0 of the trial
// expansion variable.
struct QuarticPoly {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

enum class RootPattern {
  Quadruple,        // {4}
  TripleSimple,     // {3,1}
  DoubleDouble,     // {2,2}
  DoubleTwoSimple,  // {2,1,1}
  FourDistinct,     // {1,1,1,1}
  Unsupported,      // complex pairs: no closed-form family
};

// alphas/multiplicities are parallel arrays in role order: the
// multiplicity-bearing root comes first, remaining roots descending
// (all-descending when multiplicities tie).  Refined values: each alpha is
// re-polished by Newton on the (mu-1)-th derivative, so multiple roots are
// far more accurate than the raw smeared cluster members.
struct RootClassification {
  RootPattern pattern = RootPattern::Unsupported;
  std::vector<double> alphas;
  std::vector<int> multiplicities;
  std::array<std::complex<double>, 4> roots_raw{};
  double cluster_tol = 1e-6;
  std::string detail;  // human-readable note (e.g. the complex-pair description)
};

QuarticPoly build_quartic(const ProblemParams& p, const DerivedCoefficients& d);

// Ferrari closed form with a biquadratic fallback, followed by complex
// Newton polishing to |p(r)| < 1e-12 * max(1, max|coeff|).
std::array<std::complex<double>, 4> find_roots(const QuarticPoly& q);

// Evaluate the monic quartic and its derivatives at a complex point.
std::complex<double> eval_quartic(const QuarticPoly& q, std::complex<double> x);

// Clusters roots at tol*(1+max|root|), upgrades near-multiple clusters via a
// Taylor-coefficient test on the reconstructed polynomial, and maps the
// multiplicity signature to a pattern.  Throws AmbiguousClustering when two
// clusterings are consistent within tol.
RootClassification classify_roots(const std::array<std::complex<double>, 4>& roots, double tol);

// Expand a classified root multiset back into monic coefficients.
QuarticPoly expand_roots(const std::vector<double>& alphas, const std::vector<int>& mults);

}  // namespace dpnls
