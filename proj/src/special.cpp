#include "dpnls/special.hpp"

#include <cmath>

#include "dpnls/errors.hpp"

namespace dpnls {

namespace {

// Series cutoff: with the degree-5 tail correction the relative error is
// O(errtol^6), so 1e-3 leaves ~1e-19, well under the 1e-14 target.
constexpr double kRfErrtol = 1e-3;

}  // namespace

double carlson_rf(double x, double y, double z) {
  if (!(x >= 0.0) || !(y >= 0.0) || !(z >= 0.0)) {
    throw DomainError("carlson_rf: arguments must be nonnegative");
  }
  const int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
  if (zeros >= 2) throw DomainError("carlson_rf: at most one argument may be zero");

  double a = x, b = y, c = z;
  for (int it = 0; it < 200; ++it) {
    const double mu = (a + b + c) / 3.0;
    const double dx = 1.0 - a / mu, dy = 1.0 - b / mu, dz = 1.0 - c / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kRfErrtol) {
      const double e2 = dx * dy - dz * dz;
      const double e3 = dx * dy * dz;
      // RF = mu^{-1/2} (1 - E2/10 + E3/14 + E2^2/24 - 3 E2 E3 / 44)
      return (1.0 + e2 * (-0.1 + 0.375 * e2 / 9.0) + e3 * (1.0 / 14.0 - 3.0 * e2 / 44.0)) /
             std::sqrt(mu);
    }
    const double sa = std::sqrt(a), sb = std::sqrt(b), sc = std::sqrt(c);
    const double lam = sa * (sb + sc) + sb * sc;
    a = 0.25 * (a + lam);
    b = 0.25 * (b + lam);
    c = 0.25 * (c + lam);
  }
  throw DomainError("carlson_rf: duplication failed to converge");
}

double ellip_k(double l) {
  if (!(l >= 0.0) || l >= 1.0) throw DomainError("ellip_k: modulus must satisfy 0 <= l < 1");
  return carlson_rf(0.0, (1.0 - l) * (1.0 + l), 1.0);
}

double ellip_f(double phi, double l) {
  if (!(l >= 0.0) || l > 1.0) throw DomainError("ellip_f: modulus must satisfy 0 <= l <= 1");
  if (!std::isfinite(phi)) throw DomainError("ellip_f: phi must be finite");
  const double n = std::round(phi / M_PI);
  const double phir = phi - n * M_PI;  // in [-pi/2, pi/2]
  const double s = std::sin(phir), c = std::cos(phir);
  double f;
  if (s == 0.0) {
    f = 0.0;
  } else {
    f = s * carlson_rf(c * c, 1.0 - l * l * s * s, 1.0);
  }
  if (n != 0.0) f += 2.0 * n * ellip_k(l);  // throws for l = 1: K diverges
  return f;
}

JacobiTriple jacobi_sn_cn_dn(double u, double l) {
  if (!(l >= 0.0) || l > 1.0 || !std::isfinite(u)) {
    throw DomainError("jacobi_sn_cn_dn: need finite u and modulus in [0, 1]");
  }
  if (l == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (1.0 - l < 1e-12) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  // Reduce modulo the real period: sn/cn flip sign over 2K, dn has period 2K.
  const double kk = ellip_k(l);
  double ur = std::remainder(u, 4.0 * kk);
  double sign_s = 1.0, sign_c = 1.0;
  if (ur > 2.0 * kk) {
    ur -= 2.0 * kk;
    sign_s = sign_c = -1.0;
  } else if (ur < -2.0 * kk) {
    ur += 2.0 * kk;
    sign_s = sign_c = -1.0;
  }

  // Descending Landen (AGM) recursion.
  double a[32], cfrac[32];
  a[0] = 1.0;
  cfrac[0] = l;
  double b = std::sqrt((1.0 - l) * (1.0 + l));
  int n = 0;
  while (std::abs(cfrac[n]) > 1e-17 * a[n] && n < 31) {
    ++n;
    a[n] = 0.5 * (a[n - 1] + b);
    cfrac[n] = 0.5 * (a[n - 1] - b);
    b = std::sqrt(a[n - 1] * b);
  }
  double phi = std::ldexp(a[n] * ur, n);
  for (int i = n; i >= 1; --i) {
    const double t = cfrac[i] / a[i] * std::sin(phi);
    const double clamped = std::max(-1.0, std::min(1.0, t));
    phi = 0.5 * (std::asin(clamped) + phi);
  }
  const double sn = std::sin(phi), cn = std::cos(phi);
  // Pythagorean closure: keeps dn^2 + l^2 sn^2 = 1 to rounding.  The classic
  // cos(phi_prev - phi) ratio is 0/0 at the quarter period.
  const double dn = std::sqrt(std::max(0.0, (1.0 - l * sn) * (1.0 + l * sn)));
  return {sign_s * sn, sign_c * cn, dn};
}

}  // namespace dpnls
