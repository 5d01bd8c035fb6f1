#include "dpnls/params.hpp"

#include <cmath>
#include <stdexcept>

#include "dpnls/errors.hpp"

namespace dpnls {

namespace {

bool near_zero(double value, double scale) {
  return std::abs(value) <= 1e-12 * (1.0 + std::abs(scale));
}

}  // namespace

int balance_exponents(int delta, int epsilon) {
  if (delta < 0 || epsilon < 0) {
    throw std::invalid_argument("balance_exponents: delta and epsilon must be nonnegative");
  }
  return 2 * delta + epsilon + 2;
}

ValidationReport validate(const ProblemParams& p) {
  ValidationReport r;
  auto flag = [&r](const char* field, const char* msg) { r.violations.push_back({field, msg}); };

  if (near_zero(p.m, 1.0)) flag("m", "m = 0 (exponent must avoid {0, -1, -1/2})");
  if (near_zero(p.m + 1.0, 1.0)) flag("m", "m = -1 (exponent must avoid {0, -1, -1/2})");
  if (near_zero(p.m + 0.5, 1.0)) flag("m", "m = -1/2 (exponent must avoid {0, -1, -1/2})");
  if (near_zero(p.k, 1.0)) flag("k", "k = 0 (dual-power coupling must be nonzero)");
  if (near_zero(p.xi3, 1.0)) flag("xi3", "xi3 = 0 (cubic trial coefficient must be nonzero)");
  if (near_zero(p.xi4, 1.0)) flag("xi4", "xi4 = 0 (quartic trial coefficient must be nonzero)");
  if (near_zero(p.tau0, 1.0)) flag("tau0", "tau0 = 0 (free envelope offset must be nonzero)");

  const double w2 = p.omega1 * p.omega1 + p.omega2 * p.omega2;
  if (near_zero(w2, 1.0)) flag("omega1", "omega1^2 + omega2^2 = 0 (no wave direction)");

  const double upsilon = 1.0 + 2.0 * p.m + 4.0 * p.k * (1.0 + p.m) * p.tau0;
  if (near_zero(upsilon, 1.0 + 2.0 * p.m)) {
    flag("tau0", "upsilon = 1 + 2m + 4k(1+m)tau0 = 0 (collocation system degenerates)");
  }
  return r;
}

DerivedCoefficients derive_coefficients(const ProblemParams& p) {
  const ValidationReport report = validate(p);
  if (!report.ok()) {
    std::string msg = "derive_coefficients: invalid parameters:";
    for (const auto& v : report.violations) msg += " [" + v.field + "] " + v.message + ";";
    throw ValidationError("params", msg);
  }

  const double m = p.m, k = p.k;
  const double mp1 = 1.0 + m;
  const double m2p1 = 1.0 + 2.0 * m;
  const double g = k * mp1;                      // k(1+m), recurring factor
  const double w = p.omega1 * p.omega1 + p.omega2 * p.omega2;
  const double u = m2p1 + 4.0 * g * p.tau0;      // upsilon

  DerivedCoefficients d;
  d.upsilon = u;
  d.tau1 = p.xi4 * u / (g * p.xi3);
  // Sign chosen so the reduced-ODE identity vanishes (the positive branch
  // fails it for every parameter set).
  d.zeta0 = -g * mp1 * m2p1 * w * p.xi3 * p.xi3 / (8.0 * m * m * p.xi4 * u * u);

  const double cube = g * g * p.xi3 * p.xi3 * p.xi3;         // k^2(1+m)^2 xi3^3
  const double lin = p.xi1 * p.xi4 * p.xi4 * u * u * u;      // xi1 xi4^2 upsilon^3
  d.xi2 = (lin + cube * p.tau0 * p.tau0 * (3.0 + 6.0 * m + 8.0 * g * p.tau0)) /
          (2.0 * g * p.xi3 * p.xi4 * p.tau0 * u * u);
  d.xi0 = -g * p.xi3 * p.tau0 *
          (cube * p.tau0 * p.tau0 * (m2p1 + 2.0 * g * p.tau0) - lin) /
          (2.0 * p.xi4 * p.xi4 * p.xi4 * u * u * u * u);
  d.chi3 = -(lin + cube * p.tau0 *
                       (mp1 * m2p1 * (p.chi1 * p.chi1 + p.chi2 * p.chi2) -
                        3.0 * m2p1 * p.tau0 - 4.0 * g * p.tau0 * p.tau0)) /
           (2.0 * g * g * mp1 * m2p1 * p.xi3 * p.xi3 * p.xi3 * p.tau0);
  d.omega3 = -(p.chi1 * p.omega1 + p.chi2 * p.omega2);
  d.a_squared = d.zeta0 / p.xi4;
  d.a_const = std::sqrt(std::abs(d.a_squared));
  return d;
}

}  // namespace dpnls
