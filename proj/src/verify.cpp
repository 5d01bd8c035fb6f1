#include "dpnls/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "dpnls/errors.hpp"
#include "dpnls/quartic.hpp"

namespace dpnls {

namespace {

constexpr double kMarginTol = 1e-6;  // exclusion radius around family poles

double wave_speed_w(const std::array<double, 3>& wave) {
  return wave[0] * wave[0] + wave[1] * wave[1];
}

double phase_c(const std::array<double, 3>& phase) {
  return -2.0 * phase[2] - phase[0] * phase[0] - phase[1] * phase[1];
}

}  // namespace

std::vector<double> default_gamma_samples() {
  std::vector<double> g(32);
  for (int i = 0; i < 32; ++i) g[i] = -2.0 + 4.0 * i / 31.0;
  return g;
}

double ode_identity_residual(const ProblemParams& p, const DerivedCoefficients& d,
                             const std::vector<double>& gamma_samples) {
  const double m = p.m;
  const double w = p.omega1 * p.omega1 + p.omega2 * p.omega2;
  const double c = -2.0 * d.chi3 - p.chi1 * p.chi1 - p.chi2 * p.chi2;
  double worst = 0.0;
  for (double g : gamma_samples) {
    const double v = p.tau0 + d.tau1 * g;
    const double lam = (((d.xi0 + g * (p.xi1 + g * (d.xi2 + g * (p.xi3 + g * p.xi4)))))) / d.zeta0;
    const double lam_d = (p.xi1 + g * (2.0 * d.xi2 + g * (3.0 * p.xi3 + g * 4.0 * p.xi4))) / d.zeta0;
    const double vp2 = d.tau1 * d.tau1 * lam;
    const double vpp = d.tau1 * lam_d / 2.0;
    const std::array<double, 5> terms = {
        4.0 * m * m * c * v * v, w * (1.0 - 2.0 * m) * vp2, 2.0 * m * w * v * vpp,
        8.0 * m * m * v * v * v, 8.0 * p.k * m * m * v * v * v * v};
    // Term magnitudes with every factor and polynomial coefficient taken
    // absolutely.  The signed terms all vanish together at the built-in root
    // Gamma = -tau0/tau1 of the quartic, where their common magnitude is still
    // this size; normalizing by the signed maximum would turn rounding noise
    // at a sample near that root into an unbounded ratio.
    const double ga = std::abs(g);
    const double va = std::abs(p.tau0) + std::abs(d.tau1) * ga;
    const double lam_abs =
        (std::abs(d.xi0) +
         ga * (std::abs(p.xi1) +
               ga * (std::abs(d.xi2) + ga * (std::abs(p.xi3) + ga * std::abs(p.xi4))))) /
        std::abs(d.zeta0);
    const double lam_d_abs =
        (std::abs(p.xi1) +
         ga * (2.0 * std::abs(d.xi2) + ga * (3.0 * std::abs(p.xi3) + ga * 4.0 * std::abs(p.xi4)))) /
        std::abs(d.zeta0);
    const double t1a = d.tau1 * d.tau1;
    const std::array<double, 5> mags = {
        4.0 * m * m * std::abs(c) * va * va, std::abs(w * (1.0 - 2.0 * m)) * t1a * lam_abs,
        m * std::abs(w) * va * std::abs(d.tau1) * lam_d_abs, 8.0 * m * m * va * va * va,
        8.0 * std::abs(p.k) * m * m * va * va * va * va};
    double sum = 0.0;
    double scale = 0.0;
    for (double t : terms) sum += t;
    for (double t : mags) scale = std::max(scale, t);
    if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
  }
  return worst;
}

namespace {

struct ScanStats {
  double sup = 0.0;
  double sum = 0.0;
};

// Marks every grid point whose FD stencil (for both the requested step and its
// half-step rerun) touches a denominator margin below kMarginTol, so both scans
// see the identical point set.
std::vector<char> exclusion_mask(const SolutionDescriptor& desc, const GridSpec& grid, double step,
                                 int stencil_order) {
  std::vector<double> shifts = {0.5 * step, step};
  if (stencil_order == 4) shifts.push_back(2.0 * step);
  const long total = grid.total();
  std::vector<char> mask(static_cast<size_t>(total), 0);
  for (long idx = 0; idx < total; ++idx) {
    const long it = idx % grid.nt;
    const long iy = (idx / grid.nt) % grid.ny;
    const long ix = idx / (grid.nt * static_cast<long>(grid.ny));
    const double eta = desc.wave[0] * grid.x_at(ix) + desc.wave[1] * grid.y_at(iy) +
                       desc.wave[2] * grid.t_at(it);
    bool bad = denominator_margin(desc, eta) < kMarginTol;
    for (int axis = 0; axis < 3 && !bad; ++axis) {
      const double w = desc.wave[axis];
      for (double s : shifts) {
        if (denominator_margin(desc, eta + w * s) < kMarginTol ||
            denominator_margin(desc, eta - w * s) < kMarginTol) {
          bad = true;
          break;
        }
      }
    }
    mask[static_cast<size_t>(idx)] = bad ? 1 : 0;
  }
  return mask;
}

std::complex<double> point_residual(const SolutionDescriptor& desc, double x, double y, double t,
                                    double s, int stencil_order) {
  using C = std::complex<double>;
  const auto f = [&desc](double xx, double yy, double tt) {
    return evaluate_field(desc, xx, yy, tt);
  };
  const C q0 = f(x, y, t);
  C qt, qxx, qyy;
  if (stencil_order == 2) {
    const C tp = f(x, y, t + s), tm = f(x, y, t - s);
    const C xp = f(x + s, y, t), xm = f(x - s, y, t);
    const C yp = f(x, y + s, t), ym = f(x, y - s, t);
    qt = (tp - tm) / (2.0 * s);
    qxx = (xp - 2.0 * q0 + xm) / (s * s);
    qyy = (yp - 2.0 * q0 + ym) / (s * s);
  } else {
    const C tp = f(x, y, t + s), tm = f(x, y, t - s);
    const C tp2 = f(x, y, t + 2 * s), tm2 = f(x, y, t - 2 * s);
    const C xp = f(x + s, y, t), xm = f(x - s, y, t);
    const C xp2 = f(x + 2 * s, y, t), xm2 = f(x - 2 * s, y, t);
    const C yp = f(x, y + s, t), ym = f(x, y - s, t);
    const C yp2 = f(x, y + 2 * s, t), ym2 = f(x, y - 2 * s, t);
    qt = (-tp2 + 8.0 * tp - 8.0 * tm + tm2) / (12.0 * s);
    qxx = (-xp2 + 16.0 * xp - 30.0 * q0 + 16.0 * xm - xm2) / (12.0 * s * s);
    qyy = (-yp2 + 16.0 * yp - 30.0 * q0 + 16.0 * ym - ym2) / (12.0 * s * s);
  }
  const double q2 = std::norm(q0);
  const double nonlin = std::pow(q2, desc.m) + desc.k * std::pow(q2, 2.0 * desc.m);
  return C(0.0, 1.0) * qt + 0.5 * (qxx + qyy) + nonlin * q0;
}

ScanStats scan_grid(const SolutionDescriptor& desc, const GridSpec& grid, double s,
                    int stencil_order, const std::vector<char>& mask, bool parallel) {
  const long total = grid.total();
  double sup = 0.0;
  double sum = 0.0;
  const auto body = [&](long idx, double& local_sup, double& local_sum) {
    if (mask[static_cast<size_t>(idx)]) return;
    const long it = idx % grid.nt;
    const long iy = (idx / grid.nt) % grid.ny;
    const long ix = idx / (grid.nt * static_cast<long>(grid.ny));
    const double r =
        std::abs(point_residual(desc, grid.x_at(ix), grid.y_at(iy), grid.t_at(it), s, stencil_order));
    local_sup = std::max(local_sup, r);
    local_sum += r;
  };
  if (parallel) {
#pragma omp parallel for schedule(static) reduction(max : sup) reduction(+ : sum)
    for (long idx = 0; idx < total; ++idx) body(idx, sup, sum);
  } else {
    for (long idx = 0; idx < total; ++idx) body(idx, sup, sum);
  }
  return {sup, sum};
}

ResidualReport pde_residual_impl(const SolutionDescriptor& desc, const GridSpec& grid, double step,
                                 int stencil_order, bool parallel) {
  if (stencil_order != 2 && stencil_order != 4)
    throw ValidationError("verify", "stencil_order must be 2 or 4");
  if (!(step > 0.0)) throw ValidationError("verify", "fd step must be positive");
  if (grid.nx < 1 || grid.ny < 1 || grid.nt < 1)
    throw ValidationError("verify", "grid must contain at least one point per axis");

  const std::vector<char> mask = exclusion_mask(desc, grid, step, stencil_order);
  const long total = grid.total();
  long excluded = 0;
  for (char c : mask) excluded += c;
  if (excluded == total)
    throw AllPointsSingular("every grid point sits within the singular margin");

  const ScanStats full = scan_grid(desc, grid, step, stencil_order, mask, parallel);
  const ScanStats half = scan_grid(desc, grid, step / 2.0, stencil_order, mask, parallel);

  ResidualReport rep;
  rep.sup_norm = full.sup;
  rep.mean_abs = full.sum / static_cast<double>(total - excluded);
  rep.n_points = total;
  rep.n_excluded = excluded;
  rep.step = step;
  rep.stencil_order = stencil_order;
  rep.converged_order =
      (full.sup > 0.0 && half.sup > 0.0) ? std::log2(full.sup / half.sup) : 0.0;
  return rep;
}

}  // namespace

ResidualReport pde_residual(const SolutionDescriptor& desc, const GridSpec& grid, double step,
                            int stencil_order) {
  return pde_residual_impl(desc, grid, step, stencil_order, true);
}

ResidualReport pde_residual_serial(const SolutionDescriptor& desc, const GridSpec& grid,
                                   double step, int stencil_order) {
  return pde_residual_impl(desc, grid, step, stencil_order, false);
}

namespace {

// Monic trial quartic rebuilt from the descriptor's root roles; multiplicity
// layout is fixed per family.
QuarticPoly trial_quartic(const SolutionDescriptor& desc) {
  std::vector<double> alphas;
  std::vector<int> mults;
  switch (desc.family) {
    case Family::Q1:
      alphas = {desc.alphas[0]};
      mults = {4};
      break;
    case Family::Q2:
      alphas = {desc.alphas[0], desc.alphas[1]};
      mults = {3, 1};
      break;
    case Family::Q3:
      alphas = {desc.alphas[0], desc.alphas[1]};
      mults = {2, 2};
      break;
    case Family::Q4:
      alphas = {desc.alphas[0], desc.alphas[1], desc.alphas[2]};
      mults = {2, 1, 1};
      break;
    default:
      alphas = {desc.alphas[0], desc.alphas[1], desc.alphas[2], desc.alphas[3]};
      mults = {1, 1, 1, 1};
      break;
  }
  return expand_roots(alphas, mults);
}

struct OdeRhs {
  bool reduced_route = false;  // second derivative from the envelope equation itself
  // reduced route constants
  double m = 1.0, k = 1.0, c = 0.0, w = 1.0, vscale = 1.0;
  // trial route constants
  double tau0 = 0.0, tau1 = 0.0, a_squared = 1.0;
  QuarticPoly quartic;  // monic

  double second_derivative(double eta, double v, double vp) const {
    if (reduced_route) {
      const double den = 2.0 * m * w * v;
      if (std::abs(den) < 1e-12 * (1.0 + vscale))
        throw StiffnessFailure(eta, "envelope crossed zero on the reduced route");
      const double num = 4.0 * m * m * c * v * v + w * (1.0 - 2.0 * m) * vp * vp +
                         8.0 * m * m * v * v * v + 8.0 * k * m * m * v * v * v * v;
      return -num / den;
    }
    const double g = (v - tau0) / tau1;
    const double qd =
        quartic.c1 + g * (2.0 * quartic.c2 + g * (3.0 * quartic.c3 + g * 4.0));
    return tau1 * qd / (2.0 * a_squared);
  }
};

}  // namespace

double ode_shoot_compare(const SolutionDescriptor& desc, double eta_min, double eta_max,
                         long n_steps, double rtol) {
  if (!(eta_max > eta_min)) throw ValidationError("verify", "eta_max must exceed eta_min");
  if (n_steps < 1) throw ValidationError("verify", "n_steps must be positive");
  if (!(rtol > 0.0)) throw ValidationError("verify", "rtol must be positive");

  OdeRhs rhs;
  rhs.m = desc.m;
  rhs.k = desc.k;
  rhs.c = phase_c(desc.phase);
  rhs.w = wave_speed_w(desc.wave);
  rhs.tau0 = desc.tau0;
  rhs.tau1 = desc.tau1;
  rhs.a_squared = desc.a_squared;
  rhs.reduced_route = desc.tau1 == 0.0 || desc.from_derived;
  if (!rhs.reduced_route) rhs.quartic = trial_quartic(desc);

  const std::complex<double> v0c = evaluate_inner(desc, eta_min);
  if (std::abs(v0c.imag()) > 1e-9 * (1.0 + std::abs(v0c.real())))
    throw ValidationError("verify", "closed form is not real on the shooting window");
  const double v0 = v0c.real();
  rhs.vscale = std::abs(v0);

  double vp0 = 0.0;
  if (desc.tau1 != 0.0) {
    const double g0 = (v0 - desc.tau0) / desc.tau1;
    const QuarticPoly q = rhs.reduced_route ? trial_quartic(desc) : rhs.quartic;
    const double qval = q.c0 + g0 * (q.c1 + g0 * (q.c2 + g0 * (q.c3 + g0)));
    const double vp2 = desc.tau1 * desc.tau1 * qval / desc.a_squared;
    const double delta = 1e-6 * (1.0 + std::abs(eta_min));
    const double ahead = evaluate_inner(desc, eta_min + delta).real();
    const double behind = evaluate_inner(desc, eta_min - delta).real();
    const double sign = (ahead >= behind) ? 1.0 : -1.0;
    vp0 = sign * std::sqrt(std::max(0.0, vp2));
  }

  // Dormand-Prince 5(4) pair.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  using State = std::array<double, 2>;  // {v, v'}
  const auto deriv = [&rhs](double eta, const State& y) -> State {
    return {y[1], rhs.second_derivative(eta, y[0], y[1])};
  };

  const double span = eta_max - eta_min;
  const double h_max = span / 16.0;
  const double atol = 1e-12;
  double eta = eta_min;
  State y = {v0, vp0};
  double h = std::min(span / 100.0, h_max);
  double worst = std::abs(v0 - evaluate_inner(desc, eta_min).real());
  long accepted = 0;

  while (eta < eta_max) {
    if (h < 1e-12 * (1.0 + std::abs(eta)))
      throw StiffnessFailure(eta, "adaptive step collapsed below 1e-12");
    const bool last = eta + h >= eta_max;
    if (last) h = eta_max - eta;

    const State k1 = deriv(eta, y);
    const State k2 = deriv(eta + h * a21, {y[0] + h * a21 * k1[0], y[1] + h * a21 * k1[1]});
    const State k3 = deriv(eta + h * 0.3, {y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                                           y[1] + h * (a31 * k1[1] + a32 * k2[1])});
    const State k4 = deriv(eta + h * 0.8, {y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                                           y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])});
    const State k5 =
        deriv(eta + h * 8.0 / 9.0,
              {y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
               y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])});
    const State k6 =
        deriv(eta + h, {y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] +
                                    a65 * k5[0]),
                        y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] +
                                    a65 * k5[1])});
    State ynew;
    for (int i = 0; i < 2; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const State k7 = deriv(eta + h, ynew);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 2.0);

    if (err <= 1.0) {
      eta = last ? eta_max : eta + h;
      y = ynew;
      ++accepted;
      worst = std::max(worst, std::abs(y[0] - evaluate_inner(desc, eta).real()));
      if (accepted >= n_steps && eta < eta_max)
        throw StiffnessFailure(eta, "step budget exhausted before the window end");
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h = std::min(h * factor, h_max);
  }
  return worst;
}

}  // namespace dpnls
