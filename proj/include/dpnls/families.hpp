#pragma once

#include <array>
#include <complex>

#include "dpnls/params.hpp"
#include "dpnls/quartic.hpp"

namespace dpnls {

enum class Family {
  Q1,  // quadruple root: rational 1/eta profile
  Q2,  // triple + simple: rational 1/(4A^2 - w^2 eta^2) profile
  Q3,  // double + double: exp/coth kink-type profile
  Q4,  // double + two simple: cosh-well soliton
  Q5,  // four distinct: sn^2 elliptic profile
  Q6,  // Q5 limit alpha3 = alpha4: tanh^2 profile
  Q7,  // Q5 limit alpha2 = alpha3: sin^2 periodic profile
};

struct SolutionOptions {
  bool reduced = false;   // pin tau0 to the family's zero-base value, eta0 = 0
  double eta0 = 0.0;
  int branch_sign = +1;   // the free +- of the rational/coth families
  bool real_only = false; // reject constructions whose amplitude turns imaginary
};

// Everything needed to evaluate u(eta) and q(x,y,t) for one family.  The
// family constants are stored both for inspection and so tests can recompute
// them from the roots.  a_squared keeps its sign; negative values switch the
// elliptic/hyperbolic evaluations to their imaginary-argument images.
struct SolutionDescriptor {
  Family family = Family::Q4;
  std::array<double, 4> alphas{};     // role order; unused tail entries = 0
  int n_alphas = 0;
  double tau0 = 0.0;
  double tau1 = 0.0;
  double eta0 = 0.0;
  int branch_sign = +1;
  bool reduced = false;
  double m = 1.0;
  double k = 1.0;
  double a_squared = 0.0;            // zeta0/xi4, signed
  double exponent = 0.5;             // 1/(2m)
  std::array<double, 3> phase{};     // chi1, chi2, chi3
  std::array<double, 3> wave{};      // omega1, omega2, omega3
  bool from_derived = false;         // true when built from derive_coefficients output
  double cluster_tol = 1e-6;

  // Family constants (valid subsets per family).
  std::complex<double> a1_const{};   // Q1: tau1 * A (complex when a_squared < 0)
  double a2_pow = 0.0;               // Q4: A2^{2m} = 2 tau1 (a1-a2)(a1-a3) / (a2-a3)
  std::complex<double> b_width{};    // Q4: B = sqrt((a1-a2)(a1-a3)) / A (real or imaginary)
  double d_shift = 0.0;              // Q4: D = (2 a1 - a2 - a3) / (a3 - a2)
  double a3_pow = 0.0;               // Q5-Q7: A3^{2m} = tau1 (a1-a2) M
  double m_const = 0.0;              // Q5-Q7: M = a4 - a2
  double n_const = 0.0;              // Q5-Q7: N = a1 - a4
  double l_mod = 0.0;                // Q5: modulus l, l^2 from the cross-ratio
};

SolutionDescriptor construct_solution(const RootClassification& cls, const ProblemParams& p,
                                      const DerivedCoefficients& d,
                                      const SolutionOptions& options = {});

// Inner envelope v(eta) before the fractional power; complex because the
// imaginary-amplitude branches pass through complex intermediates even though
// the result is real there.
std::complex<double> evaluate_inner(const SolutionDescriptor& desc, double eta);

// u = v^{1/(2m)} via the complex principal branch.
std::complex<double> evaluate_profile(const SolutionDescriptor& desc, double eta);

// q = exp(i(chi1 x + chi2 y + chi3 t)) * u(omega1 x + omega2 y + omega3 t).
std::complex<double> evaluate_field(const SolutionDescriptor& desc, double x, double y, double t);

// Smallest relative family-denominator magnitude at eta (1 = far from any
// singular locus).  evaluate_profile throws below 1e-13; the residual scans
// exclude below 1e-6.
double denominator_margin(const SolutionDescriptor& desc, double eta);

// Collapse a Q5 descriptor whose roots coincide within cluster_tol to the
// tanh (alpha3 = alpha4) or periodic (alpha2 = alpha3) limit family.
SolutionDescriptor degenerate_limits(const SolutionDescriptor& desc);

}  // namespace dpnls
