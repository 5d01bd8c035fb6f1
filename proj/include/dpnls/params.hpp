#pragma once

#include <string>
#include <vector>

namespace dpnls {

// Inputs of the traveling-wave ansatz
//   q(x,y,t) = exp(i(chi1 x + chi2 y + chi3 t)) u(omega1 x + omega2 y + omega3 t)
// for i q_t + (q_xx + q_yy)/2 + (|q|^{2m} + k |q|^{4m}) q = 0,
// together with the free quartic leading/cubic coefficients and the free
// constant tau0 of the trial expansion v = tau0 + tau1 Gamma.
struct ProblemParams {
  double m = 1.0;       // nonlinearity exponent (m, 2m dual powers)
  double k = 1.0;       // quintic-power coupling
  double chi1 = 0.0;    // phase wavenumbers; chi3 is derived, not set here
  double chi2 = 0.0;
  double omega1 = 1.0;  // envelope wave vector; omega3 is derived
  double omega2 = 0.0;
  double tau0 = 1.0;    // free constant term of the trial expansion
  double xi1 = 0.0;     // free linear coefficient of the trial quartic
  double xi3 = 1.0;     // free cubic coefficient of the trial quartic
  double xi4 = 1.0;     // free quartic coefficient of the trial quartic
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Coefficients fixed by the balance/collocation system.  a_squared = zeta0/xi4
// may be negative; a_const is its magnitude square root (the integration
// amplitude is then imaginary and family evaluation switches to the
// trigonometric/hyperbolic images of the elliptic forms).
struct DerivedCoefficients {
  double tau1 = 0.0;
  double zeta0 = 0.0;
  double xi2 = 0.0;
  double xi0 = 0.0;
  double chi3 = 0.0;
  double omega3 = 0.0;
  double upsilon = 0.0;    // 1 + 2m + 4k(1+m) tau0
  double a_squared = 0.0;  // zeta0/xi4, signed
  double a_const = 0.0;    // sqrt(|zeta0/xi4|)
};

// theta = 2*delta + epsilon + 2 for the (v')^2-polynomial balance.
int balance_exponents(int delta, int epsilon);

// Checks the admissible region: m not in {0,-1,-1/2}, k != 0, xi3 != 0,
// xi4 != 0, tau0 != 0, omega1^2+omega2^2 > 0, upsilon != 0.  "!= 0" means
// |value| > 1e-12 * (1 + |natural scale|).
ValidationReport validate(const ProblemParams& p);

// Solves the collocation system for the dependent coefficients.  Throws
// ValidationError when validate(p) fails.  zeta0 carries the sign that makes
// the reduced-ODE identity vanish, so a_squared can be negative; evaluation
// code is expected to handle the imaginary-amplitude branch.
DerivedCoefficients derive_coefficients(const ProblemParams& p);

}  // namespace dpnls
