#include "dpnls/figures.hpp"

#include <cmath>

#include "dpnls/errors.hpp"
#include "dpnls/special.hpp"

namespace dpnls {

namespace {

// Every preset surface uses the same wave/phase vector and the same width
// constant; only the envelope formula and its root table change per pair.
constexpr double kChi[3] = {1.0, 2.0, 3.0};
constexpr double kWave[3] = {-1.0, 1.0, 2.0};
const double kWidthA = std::sqrt(3.0) / 11.0;

double phase_arg(double x, double y, double t) {
  return kChi[0] * x + kChi[1] * y + kChi[2] * t;
}

double eta_arg(double x, double y, double t) {
  return kWave[0] * x + kWave[1] * y + kWave[2] * t;
}

// Pair 1/2: half-sum coth envelope, roots a1 = 2, a2 = 1, tau1 = 1.
std::complex<double> coth_pair(double x, double y, double t) {
  const double a1 = 2.0, a2 = 1.0, tau1 = 1.0;
  const double eta = eta_arg(x, y, t);
  const double z = (a1 - a2) / kWidthA * eta;
  if (std::abs(z) / (1.0 + std::abs(z)) < 1e-13)
    throw SingularPoint(eta, "coth envelope pole at eta = 0");
  const double inner = (a2 - a1) * tau1 / 2.0 * (1.0 + 1.0 / std::tanh(z));
  return std::pow(std::complex<double>(inner, 0.0), 0.5);
}

// Pair 3/4: cosh-well soliton, roots a1 = 1, a2 = 2, a3 = 3, tau1 = 1.
std::complex<double> cosh_pair(double x, double y, double t) {
  const double a1 = 1.0, a2 = 2.0, a3 = 3.0, tau1 = 1.0;
  const double amp2 = 2.0 * tau1 * (a1 - a2) * (a1 - a3) / (a3 - a2);
  const double width_b = std::sqrt((a1 - a2) * (a1 - a3)) / kWidthA;
  const double shift_d = (2.0 * a1 - a2 - a3) / (a3 - a2);
  const double eta = eta_arg(x, y, t);
  const double ch = std::cosh(width_b * eta);
  const double den = shift_d + ch;
  if (std::abs(den) < 1e-13 * (std::abs(shift_d) + std::abs(ch)))
    throw SingularPoint(eta, "cosh envelope denominator vanished");
  const std::complex<double> amp = std::pow(std::complex<double>(amp2, 0.0), 0.5);
  return amp / std::pow(std::complex<double>(den, 0.0), 0.5);
}

// Pair 5/6: elliptic envelope, roots a1 = 1, a2 = 2, a3 = 3, a4 = 4, tau1 = 1.
std::complex<double> sn_pair(double x, double y, double t) {
  const double a1 = 1.0, a2 = 2.0, a3 = 3.0, a4 = 4.0, tau1 = 1.0;
  const double amp2 = 2.0 * tau1 * (a1 - a2) * (a1 - a3);
  const double m_const = a4 - a2;
  const double n_const = a1 - a4;
  const double l2 = (a2 - a3) * (a1 - a4) / ((a1 - a3) * (a2 - a4));
  const double eta = eta_arg(x, y, t);
  const double phi = std::sqrt((a1 - a3) * (a2 - a4)) / (2.0 * kWidthA) * eta;
  const double sn = jacobi_sn(phi, std::sqrt(l2));
  const double den = m_const + n_const * sn * sn;
  if (std::abs(den) < 1e-13 * (std::abs(m_const) + std::abs(n_const) * sn * sn))
    throw SingularPoint(eta, "elliptic envelope denominator vanished");
  const std::complex<double> amp = std::pow(std::complex<double>(amp2, 0.0), 0.5);
  return amp / std::pow(std::complex<double>(den, 0.0), 0.5);
}

}  // namespace

FigureSpec figure_spec(int id) {
  if (id < 1 || id > 6) throw ValidationError("figures", "figure id must be in 1..6");
  FigureSpec spec;
  spec.id = id;
  spec.component = (id % 2 == 1) ? "imag" : "real";
  if (id <= 2)
    spec.family = "coth";
  else if (id <= 4)
    spec.family = "cosh-soliton";
  else
    spec.family = "sn-elliptic";
  return spec;
}

std::complex<double> figure_field(int id, double x, double y, double t) {
  if (id < 1 || id > 6) throw ValidationError("figures", "figure id must be in 1..6");
  std::complex<double> u;
  if (id <= 2)
    u = coth_pair(x, y, t);
  else if (id <= 4)
    u = cosh_pair(x, y, t);
  else
    u = sn_pair(x, y, t);
  return std::polar(1.0, phase_arg(x, y, t)) * u;
}

}  // namespace dpnls
