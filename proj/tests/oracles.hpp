#pragma once

// Test-side oracles, implemented independently of the library code paths:
// eigenvalue-based quartic roots, a cluster/refine pass for multiple-root
// comparison, and a quadrature evaluation of the symmetric elliptic integral.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dpnls/quartic.hpp"

namespace oracle {

inline std::array<std::complex<double>, 4> companion_roots(const dpnls::QuarticPoly& q) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(1, 0) = c(2, 1) = c(3, 2) = 1.0;
  c(0, 3) = -q.c0;
  c(1, 3) = -q.c1;
  c(2, 3) = -q.c2;
  c(3, 3) = -q.c3;
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(c);
  std::array<std::complex<double>, 4> roots{};
  for (int i = 0; i < 4; ++i) roots[static_cast<size_t>(i)] = solver.eigenvalues()(i);
  return roots;
}

// Collapses eigenvalue clusters to multiplicity-refined real roots: groups at
// tol*(1+max|root|), centroid, then Newton on the (mu-1)-th derivative.
// Returns the multiset expanded back to four entries, sorted ascending.
inline std::vector<double> refined_real_roots(const dpnls::QuarticPoly& q,
                                              const std::array<std::complex<double>, 4>& roots,
                                              double tol) {
  double scale = 0.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double thresh = tol * (1.0 + scale);

  std::vector<std::vector<std::complex<double>>> groups;
  for (const auto& r : roots) {
    bool placed = false;
    for (auto& g : groups)
      if (std::abs(r - g.front()) <= thresh) {
        g.push_back(r);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({r});
  }

  const auto poly = [&q](std::complex<double> x, int deriv) {
    // coefficients ascending: c0 c1 c2 c3 1
    std::array<double, 5> c = {q.c0, q.c1, q.c2, q.c3, 1.0};
    for (int d = 0; d < deriv; ++d)
      for (int i = 0; i < 4; ++i) c[static_cast<size_t>(i)] = c[static_cast<size_t>(i) + 1] * (i + 1);
    std::complex<double> acc = 0.0;
    for (int i = 4 - deriv; i >= 0; --i) acc = acc * x + c[static_cast<size_t>(i)];
    return acc;
  };

  std::vector<double> out;
  for (const auto& g : groups) {
    std::complex<double> centroid = 0.0;
    for (const auto& r : g) centroid += r;
    centroid /= static_cast<double>(g.size());
    const int mu = static_cast<int>(g.size());
    std::complex<double> x = centroid;
    for (int it = 0; it < 80; ++it) {
      const std::complex<double> f = poly(x, mu - 1);
      const std::complex<double> fp = poly(x, mu);
      if (std::abs(fp) == 0.0) break;
      const std::complex<double> step = f / fp;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    for (int i = 0; i < mu; ++i) out.push_back(x.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Adaptive Simpson on [a, b] to absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 0) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const auto simpson = [](double l, double r, double fl, double fc, double fr) {
    return (r - l) / 6.0 * (fl + 4.0 * fc + fr);
  };
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fc, double fr, double whole, int d) -> double {
    const double c = 0.5 * (l + r);
    const double lm = 0.5 * (l + c), rm = 0.5 * (c + r);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(l, c, fl, flm, fc);
    const double right = simpson(c, r, fc, frm, fr);
    if (d > 40 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(l, c, fl, flm, fc, left, d + 1) + rec(c, r, fc, frm, fr, right, d + 1);
  };
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), depth);
}

// RF(x,y,z) = 1/2 * integral_0^inf dt / sqrt((t+x)(t+y)(t+z)) for strictly
// positive arguments: substituted leg s = log(1+t) on [0, log(1+T)] plus an
// analytic 1/t series tail beyond T.
inline double rf_quadrature(double x, double y, double z) {
  const double top = 1e6 * std::max({x, y, z, 1.0});
  const auto integrand = [&](double s) {
    const double t = std::expm1(s);
    return std::exp(s) / std::sqrt((t + x) * (t + y) * (t + z));
  };
  const double main = adaptive_simpson(integrand, 0.0, std::log1p(top), 1e-15);

  const double p = x + y + z;
  const double q = x * y + y * z + z * x;
  const double r = x * y * z;
  // (1 + p/t + q/t^2 + r/t^3)^(-1/2) expanded; integrate t^(-3/2 - j) terms.
  const double c1 = -p / 2.0;
  const double c2 = 3.0 * p * p / 8.0 - q / 2.0;
  const double c3 = -5.0 * p * p * p / 16.0 + 3.0 * p * q / 4.0 - r / 2.0;
  const double rt = std::sqrt(top);
  const double tail = 2.0 / rt + c1 * (2.0 / 3.0) / (rt * top) + c2 * (2.0 / 5.0) / (rt * top * top) +
                      c3 * (2.0 / 7.0) / (rt * top * top * top);
  return 0.5 * (main + tail);
}

}  // namespace oracle
