#include "dpnls/families.hpp"

#include <algorithm>
#include <cmath>

#include "dpnls/errors.hpp"
#include "dpnls/special.hpp"

namespace dpnls {

namespace {

using C = std::complex<double>;

constexpr double kSingular = 1e-13;  // evaluate_profile refusal threshold

struct Inner {
  C v;
  double margin;  // min relative denominator magnitude encountered
};

// The elliptic-family argument squared: (a1-a3)(a2-a4) / (4 A^2).  Negative
// values route through the imaginary-argument images (sn -> i sc, tanh ->
// i tan, sin -> i sinh), keeping everything real.
double elliptic_arg_squared(const SolutionDescriptor& d) {
  return (d.alphas[0] - d.alphas[2]) * (d.alphas[1] - d.alphas[3]) / (4.0 * d.a_squared);
}

Inner inner_eval(const SolutionDescriptor& d, double eta) {
  const double et = eta - d.eta0;
  const double t0 = d.tau0, t1 = d.tau1;
  switch (d.family) {
    case Family::Q1: {
      const C a = std::sqrt(C(d.a_squared));
      const double margin = std::abs(et) / (1.0 + std::abs(et));
      const C v = t0 + t1 * d.alphas[0] +
                  static_cast<double>(d.branch_sign) * t1 * a / et;
      return {v, margin};
    }
    case Family::Q2: {
      const double a1 = d.alphas[0], a2 = d.alphas[1];
      const double w = (a1 - a2) * et;
      const double den = 4.0 * d.a_squared - w * w;
      const double scale = 4.0 * std::abs(d.a_squared) + w * w;
      const double v = t0 + t1 * a1 + 4.0 * d.a_squared * (a2 - a1) * t1 / den;
      return {C(v), std::abs(den) / scale};
    }
    case Family::Q3: {
      const double a1 = d.alphas[0], a2 = d.alphas[1];
      const C a = std::sqrt(C(d.a_squared));
      const C z = (a1 - a2) * et / a;
      if (z.real() > 700.0) {
        // exp overflow; the fraction vanishes in the limit.
        const double base = d.branch_sign > 0 ? a2 : a1;
        return {C(t0 + t1 * base), 1.0};
      }
      const C e = std::exp(z);
      const C den = e - 1.0;
      const double margin = std::abs(den) / (std::abs(e) + 1.0);
      const C v = d.branch_sign > 0 ? t0 + t1 * a2 + (a2 - a1) * t1 / den
                                    : t0 + t1 * a1 + (a1 - a2) * t1 / den;
      return {v, margin};
    }
    case Family::Q4: {
      const double a1 = d.alphas[0], a2 = d.alphas[1], a3 = d.alphas[2];
      const double b2 = (a1 - a2) * (a1 - a3) / d.a_squared;
      const double ch = b2 >= 0.0 ? std::cosh(std::sqrt(b2) * et)
                                  : std::cos(std::sqrt(-b2) * et);
      const double c0 = 2.0 * a1 - a2 - a3;
      const double c1 = (a3 - a2) * ch;
      if (std::isinf(c1)) return {C(t0 + t1 * a1), 1.0};
      const double den = c0 + c1;
      const double scale = std::abs(c0) + std::abs(c1);
      const double v = t0 + t1 * a1 - 2.0 * (a1 - a2) * (a1 - a3) * t1 / den;
      return {C(v), scale > 0.0 ? std::abs(den) / scale : 1.0};
    }
    case Family::Q5: {
      const double a2 = d.alphas[1];
      const double num0 = t1 * (d.alphas[0] - a2) * d.m_const;
      const double c2 = elliptic_arg_squared(d);
      double den, scale, num;
      if (c2 >= 0.0) {
        const double s = jacobi_sn(std::sqrt(c2) * et, d.l_mod);
        den = d.m_const + d.n_const * s * s;
        scale = std::abs(d.m_const) + std::abs(d.n_const) * s * s;
        num = num0;
      } else {
        const double lp = std::sqrt(std::max(0.0, (1.0 - d.l_mod) * (1.0 + d.l_mod)));
        const auto j = jacobi_sn_cn_dn(std::sqrt(-c2) * et, lp);
        // sn(iy,l) = i sn(y,l')/cn(y,l'); multiply through by cn^2 so the
        // cn zeros cancel instead of producing fake infinities.
        den = d.m_const * j.cn * j.cn - d.n_const * j.sn * j.sn;
        scale = std::abs(d.m_const) * j.cn * j.cn + std::abs(d.n_const) * j.sn * j.sn;
        num = num0 * j.cn * j.cn;
      }
      const double v = t0 + t1 * a2 + num / den;
      return {C(v), scale > 0.0 ? std::abs(den) / scale : 1.0};
    }
    case Family::Q6: {
      const double a2 = d.alphas[1];
      const double num0 = t1 * (d.alphas[0] - a2) * d.m_const;
      const double c2 = elliptic_arg_squared(d);
      double den, scale, num;
      if (c2 >= 0.0) {
        const double th = std::tanh(std::sqrt(c2) * et);
        den = d.m_const + d.n_const * th * th;
        scale = std::abs(d.m_const) + std::abs(d.n_const) * th * th;
        num = num0;
      } else {
        const double y = std::sqrt(-c2) * et;
        const double cy = std::cos(y), sy = std::sin(y);
        den = d.m_const * cy * cy - d.n_const * sy * sy;
        scale = std::abs(d.m_const) * cy * cy + std::abs(d.n_const) * sy * sy;
        num = num0 * cy * cy;
      }
      const double v = t0 + t1 * a2 + num / den;
      return {C(v), scale > 0.0 ? std::abs(den) / scale : 1.0};
    }
    case Family::Q7: {
      const double a2 = d.alphas[1];
      const double num0 = t1 * (d.alphas[0] - a2) * d.m_const;
      const double c2 = elliptic_arg_squared(d);
      double den, scale;
      if (c2 >= 0.0) {
        const double s = std::sin(std::sqrt(c2) * et);
        den = d.m_const + d.n_const * s * s;
        scale = std::abs(d.m_const) + std::abs(d.n_const) * s * s;
      } else {
        const double sh = std::sinh(std::sqrt(-c2) * et);
        if (std::isinf(sh)) return {C(t0 + t1 * a2), 1.0};
        den = d.m_const - d.n_const * sh * sh;
        scale = std::abs(d.m_const) + std::abs(d.n_const) * sh * sh;
      }
      const double v = t0 + t1 * a2 + num0 / den;
      return {C(v), scale > 0.0 ? std::abs(den) / scale : 1.0};
    }
  }
  throw ValidationError("families", "inner_eval: corrupt family tag");
}

}  // namespace

SolutionDescriptor construct_solution(const RootClassification& cls, const ProblemParams& p,
                                      const DerivedCoefficients& d,
                                      const SolutionOptions& options) {
  if (cls.pattern == RootPattern::Unsupported) {
    throw UnsupportedPattern(cls.detail.empty()
                                 ? "no closed-form family for complex root patterns"
                                 : "no closed-form family: " + cls.detail);
  }
  if (options.branch_sign != 1 && options.branch_sign != -1) {
    throw ValidationError("families", "branch_sign must be +1 or -1");
  }

  SolutionDescriptor desc;
  desc.m = p.m;
  desc.k = p.k;
  desc.exponent = 1.0 / (2.0 * p.m);
  desc.tau1 = d.tau1;
  desc.a_squared = d.a_squared;
  desc.phase = {p.chi1, p.chi2, d.chi3};
  desc.wave = {p.omega1, p.omega2, d.omega3};
  desc.branch_sign = options.branch_sign;
  desc.reduced = options.reduced;
  desc.eta0 = options.reduced ? 0.0 : options.eta0;
  desc.from_derived = true;
  desc.cluster_tol = cls.cluster_tol;

  desc.n_alphas = static_cast<int>(cls.alphas.size());
  for (int i = 0; i < desc.n_alphas && i < 4; ++i) desc.alphas[i] = cls.alphas[i];

  const double t1 = d.tau1;
  switch (cls.pattern) {
    case RootPattern::Quadruple:
      desc.family = Family::Q1;
      desc.tau0 = options.reduced ? -t1 * desc.alphas[0] : p.tau0;
      desc.a1_const = t1 * std::sqrt(C(d.a_squared));
      if (options.real_only && d.a_squared < 0.0) {
        throw NonRealAmplitude("rational family needs real A but A^2 < 0");
      }
      break;
    case RootPattern::TripleSimple:
      desc.family = Family::Q2;
      desc.tau0 = options.reduced ? -t1 * desc.alphas[0] : p.tau0;
      break;
    case RootPattern::DoubleDouble:
      desc.family = Family::Q3;
      desc.tau0 = options.reduced ? -t1 * desc.alphas[0] : p.tau0;
      if (options.real_only && d.a_squared < 0.0) {
        throw NonRealAmplitude("exponential family needs real A but A^2 < 0");
      }
      break;
    case RootPattern::DoubleTwoSimple: {
      desc.family = Family::Q4;
      desc.tau0 = options.reduced ? -t1 * desc.alphas[0] : p.tau0;
      // The double root pins the turning value v(0) = tau0 + tau1*alpha3.
      // Prefer the simple-root assignment whose turning value is positive
      // (the bounded bright-soliton pocket); default is descending simples.
      const double v_desc = desc.tau0 + t1 * desc.alphas[2];
      const double v_swap = desc.tau0 + t1 * desc.alphas[1];
      if (v_desc < 0.0 && v_swap > 0.0) std::swap(desc.alphas[1], desc.alphas[2]);
      const double a1 = desc.alphas[0], a2 = desc.alphas[1], a3 = desc.alphas[2];
      desc.a2_pow = 2.0 * t1 * (a1 - a2) * (a1 - a3) / (a2 - a3);
      desc.b_width = std::sqrt(C((a1 - a2) * (a1 - a3) / d.a_squared));
      desc.d_shift = (2.0 * a1 - a2 - a3) / (a3 - a2);
      if (options.real_only && desc.a2_pow < 0.0) {
        throw NonRealAmplitude("soliton amplitude base A2^{2m} < 0 with real_only set");
      }
      break;
    }
    case RootPattern::FourDistinct: {
      desc.family = Family::Q5;
      desc.tau0 = options.reduced ? -t1 * desc.alphas[1] : p.tau0;
      const double a1 = desc.alphas[0], a2 = desc.alphas[1], a3 = desc.alphas[2],
                   a4 = desc.alphas[3];
      desc.m_const = a4 - a2;
      desc.n_const = a1 - a4;
      desc.a3_pow = t1 * (a1 - a2) * desc.m_const;
      const double l2 = (a2 - a3) * (a1 - a4) / ((a1 - a3) * (a2 - a4));
      desc.l_mod = std::sqrt(std::clamp(l2, 0.0, 1.0));
      if (options.real_only && desc.a3_pow < 0.0) {
        throw NonRealAmplitude("elliptic amplitude base A3^{2m} < 0 with real_only set");
      }
      break;
    }
    case RootPattern::Unsupported:
      break;  // unreachable
  }
  return desc;
}

std::complex<double> evaluate_inner(const SolutionDescriptor& desc, double eta) {
  return inner_eval(desc, eta).v;
}

double denominator_margin(const SolutionDescriptor& desc, double eta) {
  return inner_eval(desc, eta).margin;
}

std::complex<double> evaluate_profile(const SolutionDescriptor& desc, double eta) {
  const Inner in = inner_eval(desc, eta);
  if (!(in.margin >= kSingular)) {
    throw SingularPoint(eta, "family denominator vanishes at eta = " + std::to_string(eta));
  }
  const C u = std::pow(in.v, desc.exponent);
  if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
    throw SingularPoint(eta, "envelope power diverges at eta = " + std::to_string(eta));
  }
  return u;
}

std::complex<double> evaluate_field(const SolutionDescriptor& desc, double x, double y, double t) {
  const double eta = desc.wave[0] * x + desc.wave[1] * y + desc.wave[2] * t;
  const double ph = desc.phase[0] * x + desc.phase[1] * y + desc.phase[2] * t;
  return std::polar(1.0, ph) * evaluate_profile(desc, eta);
}

SolutionDescriptor degenerate_limits(const SolutionDescriptor& desc) {
  if (desc.family != Family::Q5) {
    throw ValidationError("families", "degenerate_limits expects an elliptic (Q5) descriptor");
  }
  double max_abs = 0.0;
  for (int i = 0; i < desc.n_alphas; ++i) max_abs = std::max(max_abs, std::abs(desc.alphas[i]));
  const double tol = desc.cluster_tol * (1.0 + max_abs);

  SolutionDescriptor out = desc;
  if (std::abs(desc.alphas[2] - desc.alphas[3]) <= tol) {
    out.family = Family::Q6;  // l -> 1: sn -> tanh
    out.l_mod = 1.0;
  } else if (std::abs(desc.alphas[1] - desc.alphas[2]) <= tol) {
    out.family = Family::Q7;  // l -> 0: sn -> sin
    out.l_mod = 0.0;
  } else {
    throw NotDegenerate("no coincident root pair within cluster tol " +
                        std::to_string(desc.cluster_tol));
  }
  return out;
}

}  // namespace dpnls
