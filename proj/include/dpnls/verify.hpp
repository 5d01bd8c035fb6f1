#pragma once

#include <vector>

#include "dpnls/families.hpp"
#include "dpnls/grid.hpp"
#include "dpnls/params.hpp"

namespace dpnls {

struct ResidualReport {
  double sup_norm = 0.0;
  double mean_abs = 0.0;
  long n_points = 0;    // total grid points sampled
  long n_excluded = 0;  // singular-adjacent points skipped
  double step = 0.0;
  int stencil_order = 4;
  double converged_order = 0.0;  // fitted from an internal step-halving rerun
};

// Exact algebraic residual of the reduced envelope ODE: v = tau0 + tau1*G,
// (v')^2 = tau1^2 * Lambda(G), v'' = tau1 * Lambda'(G)/2 with
// Lambda = (xi4 G^4 + xi3 G^3 + xi2 G^2 + xi1 G + xi0)/zeta0, substituted into
//   4 m^2 C v^2 + W(1-2m)(v')^2 + 2 m W v v'' + 8 m^2 v^3 + 8 k m^2 v^4
// (C = -2 chi3 - chi1^2 - chi2^2, W = omega1^2 + omega2^2).  Returns the max
// over samples of |residual| / max-term-magnitude.  No differencing: this is
// near machine precision when the coefficients are consistent.
double ode_identity_residual(const ProblemParams& p, const DerivedCoefficients& d,
                             const std::vector<double>& gamma_samples);

// Default Gamma sample set used by the CLI: 32 points in [-2, 2].
std::vector<double> default_gamma_samples();

// Central-difference residual of i q_t + (q_xx + q_yy)/2 + (|q|^{2m} + k|q|^{4m}) q
// over the grid sample points; step is the FD spacing, stencil_order 2 or 4.
// Points where any family denominator falls below 1e-6 * scale at any stencil
// node are excluded (union of the h and h/2 masks, so converged_order compares
// identical point sets).  Throws AllPointsSingular when nothing remains.
ResidualReport pde_residual(const SolutionDescriptor& desc, const GridSpec& grid, double step,
                            int stencil_order);

// Reference implementation of the same scan without threading.  max/mean
// reductions may reassociate; agreement tolerance is 1e-13 relative.
ResidualReport pde_residual_serial(const SolutionDescriptor& desc, const GridSpec& grid,
                                   double step, int stencil_order);

// Integrates the envelope ODE as a first-order system in (v, v') with an
// adaptive Dormand-Prince 4(5) scheme from the closed-form initial condition
// at eta_min, and returns the max |v_numeric - v_closed| at accepted steps.
// Descriptors built from derived coefficients integrate the reduced envelope
// ODE; synthetic descriptors integrate the equivalent trial-quartic route
// (which tolerates v = 0 crossings).  n_steps caps accepted steps.
double ode_shoot_compare(const SolutionDescriptor& desc, double eta_min, double eta_max,
                         long n_steps, double rtol = 1e-10);

}  // namespace dpnls
