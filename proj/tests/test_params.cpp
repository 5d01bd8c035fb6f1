#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpnls/errors.hpp"
#include "dpnls/params.hpp"
#include "golden.hpp"
#include "reference_values.hpp"

using namespace dpnls;
using testfx::golden_params;

namespace {

bool flags_field(const ValidationReport& r, const std::string& field) {
  for (const auto& v : r.violations)
    if (v.field == field) return true;
  return false;
}

}  // namespace

TEST_CASE("balance fixes the quartic degree") {
  CHECK(balance_exponents(1, 0) == 4);
  CHECK(balance_exponents(2, 0) == 6);
  CHECK(balance_exponents(1, 1) == 5);
  CHECK(balance_exponents(3, 2) == 10);
}

TEST_CASE("validate accepts the golden set") {
  CHECK(validate(golden_params()).ok());
}

TEST_CASE("validate flags each admissibility violation by field") {
  auto p = golden_params();
  p.m = 0.0;
  CHECK(flags_field(validate(p), "m"));
  p = golden_params();
  p.m = -1.0;
  CHECK(flags_field(validate(p), "m"));
  p = golden_params();
  p.m = -0.5;
  CHECK(flags_field(validate(p), "m"));
  p = golden_params();
  p.k = 0.0;
  CHECK(flags_field(validate(p), "k"));
  p = golden_params();
  p.xi3 = 0.0;
  CHECK(flags_field(validate(p), "xi3"));
  p = golden_params();
  p.xi4 = 0.0;
  CHECK(flags_field(validate(p), "xi4"));
  p = golden_params();
  p.tau0 = 0.0;
  CHECK(flags_field(validate(p), "tau0"));
  p = golden_params();
  p.omega1 = 0.0;
  p.omega2 = 0.0;
  CHECK_FALSE(validate(p).ok());
  // upsilon = 1 + 2m + 4k(1+m) tau0 = 0 at tau0 = -3/8 for m = k = 1.
  p = golden_params();
  p.tau0 = -3.0 / 8.0;
  CHECK_FALSE(validate(p).ok());
}

TEST_CASE("derive_coefficients reproduces the frozen golden values") {
  const DerivedCoefficients d = derive_coefficients(golden_params());
  CHECK(d.upsilon == doctest::Approx(ref::golden_upsilon).epsilon(1e-15));
  CHECK(d.tau1 == doctest::Approx(ref::golden_tau1).epsilon(1e-15));
  CHECK(d.zeta0 == doctest::Approx(ref::golden_zeta0).epsilon(1e-15));
  CHECK(d.xi2 == doctest::Approx(ref::golden_xi2).epsilon(1e-15));
  CHECK(d.xi0 == doctest::Approx(ref::golden_xi0).epsilon(1e-15));
  CHECK(d.chi3 == doctest::Approx(ref::golden_chi3).epsilon(1e-15));
  CHECK(d.omega3 == doctest::Approx(ref::golden_omega3).epsilon(1e-15));
  CHECK(d.a_squared == doctest::Approx(ref::golden_a_squared).epsilon(1e-15));
  CHECK(d.a_const == doctest::Approx(ref::golden_a_abs).epsilon(1e-15));
}

TEST_CASE("derive_coefficients throws on inadmissible input") {
  auto p = golden_params();
  p.xi4 = 0.0;
  CHECK_THROWS_AS(derive_coefficients(p), ValidationError);
  p = golden_params();
  p.m = -0.5;
  CHECK_THROWS_AS(derive_coefficients(p), ValidationError);
}

TEST_CASE("xi1 perturbation moves every dependent coefficient") {
  const DerivedCoefficients base = derive_coefficients(golden_params());
  auto p = golden_params();
  p.xi1 = 0.1;
  const DerivedCoefficients d = derive_coefficients(p);
  // tau1/zeta0/omega3 do not depend on xi1; the collocation outputs do.
  CHECK(d.tau1 == base.tau1);
  CHECK(d.zeta0 == base.zeta0);
  CHECK(d.omega3 == base.omega3);
  CHECK(d.xi2 != base.xi2);
  CHECK(d.xi0 != base.xi0);
  CHECK(d.chi3 != base.chi3);
}

TEST_CASE("upsilon matches its defining combination") {
  auto p = golden_params();
  p.m = 0.6;
  p.k = 2.5;
  p.tau0 = -0.4;
  const DerivedCoefficients d = derive_coefficients(p);
  CHECK(d.upsilon ==
        doctest::Approx(1.0 + 2.0 * p.m + 4.0 * p.k * (1.0 + p.m) * p.tau0).epsilon(1e-15));
  CHECK(d.a_squared == doctest::Approx(d.zeta0 / p.xi4).epsilon(1e-15));
  CHECK(d.a_const == doctest::Approx(std::sqrt(std::abs(d.a_squared))).epsilon(1e-15));
  CHECK(d.omega3 == doctest::Approx(-(p.chi1 * p.omega1 + p.chi2 * p.omega2)).epsilon(1e-15));
}
