#include "dpnls/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpnls/errors.hpp"

namespace dpnls {

namespace {

using C = std::complex<double>;

constexpr double kEps = 2.220446049250313e-16;

// Largest-magnitude root of t^3 + a2 t^2 + a1 t + a0 (complex-safe Cardano
// plus two Newton sweeps).  Used for the resolvent cubic, where the largest
// root keeps the sqrt in Ferrari's factorization well away from zero.
C cubic_root_max(double a2, double a1, double a0) {
  const double p = a1 - a2 * a2 / 3.0;
  const double q = a0 - a2 * a1 / 3.0 + 2.0 * a2 * a2 * a2 / 27.0;
  const C disc = std::sqrt(C(q * q / 4.0 + p * p * p / 27.0));
  C w = std::pow(-q / 2.0 + disc, 1.0 / 3.0);
  if (std::abs(w) < 1e-300) w = std::pow(-q / 2.0 - disc, 1.0 / 3.0);
  const C rot(-0.5, std::sqrt(3.0) / 2.0);
  C best = 0.0;
  C u = w;
  for (int i = 0; i < 3; ++i, u *= rot) {
    // u + (-p/3)/u is the depressed root unless u vanished (triple root 0).
    const C t = (std::abs(u) > 1e-300 ? u - p / (3.0 * u) : C(0.0)) - a2 / 3.0;
    if (std::abs(t) >= std::abs(best)) best = t;
  }
  for (int i = 0; i < 2; ++i) {
    const C f = ((best + a2) * best + a1) * best + a0;
    const C fp = (3.0 * best + 2.0 * a2) * best + a1;
    if (std::abs(fp) < 1e-300) break;
    best -= f / fp;
  }
  return best;
}

// Stable quadratic y^2 + b y + c = 0.
void quadratic_roots(C b, C c, C& r1, C& r2) {
  const C d = std::sqrt(b * b - 4.0 * c);
  const C q = (std::real(std::conj(b) * d) >= 0.0) ? -0.5 * (b + d) : -0.5 * (b - d);
  if (std::abs(q) > 1e-300) {
    r1 = q;
    r2 = c / q;
  } else {
    r1 = r2 = C(0.0);
  }
}

double coeff_scale(const QuarticPoly& q) {
  return std::max({1.0, std::abs(q.c3), std::abs(q.c2), std::abs(q.c1), std::abs(q.c0)});
}

C eval_deriv(const QuarticPoly& q, C x) { return ((4.0 * x + 3.0 * q.c3) * x + 2.0 * q.c2) * x + q.c1; }

// Taylor coefficients of the monic quartic about c: b[j] = p^(j)(c)/j!
// (Horner shift by repeated synthetic division).
std::array<C, 5> taylor_shift(const QuarticPoly& q, C c) {
  std::array<C, 5> b{q.c0, q.c1, q.c2, q.c3, 1.0};
  for (int j = 0; j < 4; ++j)
    for (int i = 3; i >= j; --i) b[i] += c * b[i + 1];
  return b;
}

long binom(int n, int r) {
  long v = 1;
  for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
  return v;
}

// Quotient and remainder of the monic quartic divided by a monic degree-mu
// factor (ascending coefficients f[0..mu-1], leading 1 implicit).
struct FactorSplit {
  std::array<double, 5> quo{};  // ascending, degree 4-mu, monic
  std::array<double, 4> rem{};  // ascending, degree < mu
};

FactorSplit divide_monic(const QuarticPoly& q, const double* f, int mu) {
  double a[5] = {q.c0, q.c1, q.c2, q.c3, 1.0};
  FactorSplit out;
  for (int i = 4; i >= mu; --i) {
    const double qc = a[i];
    out.quo[i - mu] = qc;
    for (int j = 0; j < mu; ++j) a[i - mu + j] -= qc * f[j];
  }
  for (int j = 0; j < mu; ++j) out.rem[j] = a[j];
  return out;
}

// x^j * G reduced mod the monic factor F; ascending, degree < mu.
std::array<double, 4> shifted_mod(const double* g, int gdeg, int j, const double* f, int mu) {
  double w[8] = {0.0};
  for (int i = 0; i <= gdeg; ++i) w[i + j] = g[i];
  for (int i = gdeg + j; i >= mu; --i) {
    const double c = w[i];
    if (c == 0.0) continue;
    w[i] = 0.0;
    for (int k = 0; k < mu; ++k) w[i - mu + k] -= c * f[k];
  }
  std::array<double, 4> out{};
  for (int k = 0; k < mu; ++k) out[k] = w[k];
  return out;
}

bool solve_linear(double a[4][4], double* b, int n) {
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) return false;
    if (piv != c) {
      for (int k = c; k < n; ++k) std::swap(a[c][k], a[piv][k]);
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double m = a[r][c] / a[c][c];
      if (m == 0.0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double v = b[r];
    for (int k = r + 1; k < n; ++k) v -= a[r][k] * b[k];
    b[r] = v / a[r][r];
  }
  return true;
}

// Jointly refine the monic degree-mu factor of q covering a root cluster:
// Newton on the division remainder (q = F G + R, dR = -(dF G mod F)).
// Unlike polishing cluster roots one by one, this keeps their symmetric
// functions accurate even when the cluster is a smeared multiple root, and
// the map is regular there as long as the cluster carries the root's full
// multiplicity (F coprime to G).
void refine_factor(const QuarticPoly& q, double* f, int mu) {
  const double floor_norm = 16.0 * kEps * coeff_scale(q);
  auto rem_norm = [&](const double* fc) {
    const FactorSplit s = divide_monic(q, fc, mu);
    double n = 0.0;
    for (int j = 0; j < mu; ++j) n = std::max(n, std::abs(s.rem[j]));
    return n;
  };
  double best[4] = {0.0, 0.0, 0.0, 0.0};
  std::copy(f, f + mu, best);
  double best_norm = rem_norm(f);
  double cur[4] = {0.0, 0.0, 0.0, 0.0};
  std::copy(f, f + mu, cur);
  for (int it = 0; it < 40 && best_norm > floor_norm; ++it) {
    const FactorSplit s = divide_monic(q, cur, mu);
    double m[4][4];
    for (int j = 0; j < mu; ++j) {
      const auto col = shifted_mod(s.quo.data(), 4 - mu, j, cur, mu);
      for (int i = 0; i < mu; ++i) m[i][j] = col[i];
    }
    double step[4];
    for (int i = 0; i < mu; ++i) step[i] = s.rem[i];
    if (!solve_linear(m, step, mu)) break;
    for (int j = 0; j < mu; ++j) cur[j] += step[j];
    const double n = rem_norm(cur);
    if (n >= best_norm) break;
    best_norm = n;
    std::copy(cur, cur + mu, best);
  }
  std::copy(best, best + mu, f);
}

// Roots of the refined monic quadratic factor; conjugate-exact when complex
// and sum-exact when real.
void quadratic_factor_roots(const double* f, C& r1, C& r2) {
  const double disc = f[1] * f[1] - 4.0 * f[0];
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double big = -0.5 * (f[1] + (f[1] >= 0.0 ? sq : -sq));
    if (big != 0.0) {
      r1 = big;
      r2 = f[0] / big;
    } else {
      r1 = 0.0;
      r2 = -f[1];
    }
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    r1 = C(-0.5 * f[1], im);
    r2 = C(-0.5 * f[1], -im);
  }
}

// Cardano on the refined monic cubic factor.  All three roots come from one
// cube root rotated by exact unit ratios, so their sum stays -f[2] to
// rounding even when the factor is a smeared triple root.
void cubic_factor_roots(const double* f, C* out) {
  const double h = -f[2] / 3.0;
  const double p = (3.0 * h + 2.0 * f[2]) * h + f[1];    // F'(h)
  const double q0 = ((h + f[2]) * h + f[1]) * h + f[0];  // F(h)
  const C sq = std::sqrt(C(q0 * q0 / 4.0 + p * p * p / 27.0));
  C a = std::pow(-q0 / 2.0 + sq, 1.0 / 3.0);
  if (std::abs(a) < 1e-300) a = std::pow(-q0 / 2.0 - sq, 1.0 / 3.0);
  const C b = (std::abs(a) > 1e-300) ? C(-p / 3.0) / a : C(0.0);
  const C w(-0.5, std::sqrt(3.0) / 2.0);
  C wa = 1.0, wb = 1.0;
  for (int k = 0; k < 3; ++k) {
    out[k] = h + a * wa + b * wb;
    wa *= w;
    wb *= std::conj(w);
  }
}

struct Cluster {
  std::vector<int> members;  // indices into roots
  C centroid;
};

// Newton on p^(mu-1) from the cluster centroid: multiple roots are simple
// roots of the (mu-1)-th derivative, so this removes the eps^(1/mu) smear.
double refine_root(const QuarticPoly& q, double seed, int mu) {
  // Derivative coefficients, ascending, of p^(mu-1).
  double base[5] = {q.c0, q.c1, q.c2, q.c3, 1.0};
  int deg = 4;
  for (int d = 1; d < mu; ++d) {
    for (int i = 0; i < deg; ++i) base[i] = (i + 1) * base[i + 1];
    --deg;
  }
  double x = seed;
  for (int it = 0; it < 60; ++it) {
    double f = 0.0, fp = 0.0;
    for (int i = deg; i >= 0; --i) {
      fp = fp * x + f;
      f = f * x + base[i];
    }
    if (fp == 0.0) break;
    const double step = f / fp;
    x -= step;
    if (std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(x))) break;
  }
  return x;
}

RootClassification make_unsupported(const std::array<C, 4>& roots, double tol,
                                    const std::string& why) {
  RootClassification cls;
  cls.pattern = RootPattern::Unsupported;
  cls.roots_raw = roots;
  cls.cluster_tol = tol;
  cls.detail = why;
  return cls;
}

}  // namespace

QuarticPoly build_quartic(const ProblemParams& p, const DerivedCoefficients& d) {
  return {p.xi3 / p.xi4, d.xi2 / p.xi4, p.xi1 / p.xi4, d.xi0 / p.xi4};
}

std::complex<double> eval_quartic(const QuarticPoly& q, std::complex<double> x) {
  return (((x + q.c3) * x + q.c2) * x + q.c1) * x + q.c0;
}

std::array<std::complex<double>, 4> find_roots(const QuarticPoly& q) {
  const double b = q.c3 / 4.0;
  // Depressed quartic y^4 + p y^2 + r y + s, x = y - b.
  const double p = q.c2 - 6.0 * b * b;
  const double r = q.c1 - 2.0 * q.c2 * b + 8.0 * b * b * b;
  const double s = q.c0 - q.c1 * b + q.c2 * b * b - 3.0 * b * b * b * b;

  std::array<C, 4> ys;
  if (std::abs(r) < 1e-14 * (1.0 + std::abs(p) + std::abs(s))) {
    C z1, z2;
    quadratic_roots(C(p), C(s), z1, z2);
    const C s1 = std::sqrt(z1), s2 = std::sqrt(z2);
    ys = {s1, -s1, s2, -s2};
  } else {
    const C t = cubic_root_max(2.0 * p, p * p - 4.0 * s, -r * r);
    const C w = std::sqrt(t);
    // (y^2 + w y + u)(y^2 - w y + v) with u+v = p+t, v-u = r/w.
    const C u = 0.5 * (p + t - r / w);
    const C v = 0.5 * (p + t + r / w);
    quadratic_roots(w, u, ys[0], ys[1]);
    quadratic_roots(-w, v, ys[2], ys[3]);
  }

  const double scale = coeff_scale(q);
  std::array<C, 4> roots;
  for (int i = 0; i < 4; ++i) {
    C x = ys[i] - b;
    for (int it = 0; it < 40; ++it) {
      const C f = eval_quartic(q, x);
      if (std::abs(f) < 1e-13 * scale) break;
      const C fp = eval_deriv(q, x);
      if (std::abs(fp) < 1e-300) break;
      const C step = f / fp;
      x -= step;
      if (std::abs(step) < kEps * (1.0 + std::abs(x))) break;
    }
    roots[i] = x;
  }

  // Ferrari splits a smeared multiple root across its two quadratics, and
  // the per-root polish above drifts the cluster's symmetric functions off q
  // by far more than rounding.  Re-deriving each cluster's factor jointly and
  // re-extracting restores them; groups are conjugate-closed because a root
  // within reach of a complex root is equally within reach of its conjugate.
  double max_abs = 0.0;
  for (const auto& z : roots) max_abs = std::max(max_abs, std::abs(z));
  const double group_radius = 0.02 * (1.0 + max_abs);
  std::array<int, 4> parent{0, 1, 2, 3};
  auto find = [&parent](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(roots[i] - roots[j]) <= group_radius) parent[find(i)] = find(j);
  for (int rep = 0; rep < 4; ++rep) {
    if (find(rep) != rep) continue;
    int grp[4];
    int mu = 0;
    for (int i = 0; i < 4; ++i)
      if (find(i) == rep) grp[mu++] = i;
    if (mu < 2 || mu > 3) continue;  // quartic factor is q itself: already exact
    double f[4] = {0.0, 0.0, 0.0, 0.0};
    if (mu == 2) {
      const C za = roots[grp[0]], zb = roots[grp[1]];
      f[1] = -(za + zb).real();
      f[0] = (za * zb).real();
    } else {
      const C za = roots[grp[0]], zb = roots[grp[1]], zc = roots[grp[2]];
      f[2] = -(za + zb + zc).real();
      f[1] = (za * zb + za * zc + zb * zc).real();
      f[0] = -(za * zb * zc).real();
    }
    refine_factor(q, f, mu);
    if (mu == 2) {
      quadratic_factor_roots(f, roots[grp[0]], roots[grp[1]]);
    } else {
      C out[3];
      cubic_factor_roots(f, out);
      for (int k = 0; k < 3; ++k) roots[grp[k]] = out[k];
    }
  }
  return roots;
}

QuarticPoly expand_roots(const std::vector<double>& alphas, const std::vector<int>& mults) {
  double c[5] = {1.0, 0.0, 0.0, 0.0, 0.0};  // c[j] = coefficient of x^(deg-j)
  int deg = 0;
  for (size_t i = 0; i < alphas.size(); ++i) {
    for (int rep = 0; rep < mults[i]; ++rep) {
      ++deg;
      for (int j = deg; j >= 1; --j) c[j] -= alphas[i] * c[j - 1];
    }
  }
  return {c[1], c[2], c[3], c[4]};
}

RootClassification classify_roots(const std::array<std::complex<double>, 4>& roots, double tol) {
  if (!(tol > 0.0)) throw ValidationError("quartic", "classify_roots: tol must be positive");

  double max_abs = 0.0;
  for (const auto& r : roots) max_abs = std::max(max_abs, std::abs(r));
  const double scale = 1.0 + max_abs;
  const double t_abs = tol * scale;

  // Stage 1: union-find at the tol radius.  Transitive chains wider than tol
  // are kept: they arise from the smear stars of multiple roots and are
  // validated against the polynomial below.
  std::array<int, 4> parent{0, 1, 2, 3};
  auto find = [&parent](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(roots[i] - roots[j]) <= t_abs) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  for (int rep = 0; rep < 4; ++rep) {
    if (find(rep) != rep) continue;
    Cluster cl;
    for (int i = 0; i < 4; ++i)
      if (find(i) == rep) cl.members.push_back(i);
    C sum = 0.0;
    for (int i : cl.members) sum += roots[i];
    cl.centroid = sum / static_cast<double>(cl.members.size());
    clusters.push_back(std::move(cl));
  }

  // Monic reconstruction from the raw roots.  The complex product keeps the
  // symmetric functions of conjugate-closed smear stars; the coefficients of
  // a conjugate-closed set are real to rounding.
  const QuarticPoly recon = [&roots] {
    C c[5] = {1.0, 0.0, 0.0, 0.0, 0.0};  // c[j] = coefficient of x^(4-j)
    int deg = 0;
    for (const C& z : roots) {
      ++deg;
      for (int j = deg; j >= 1; --j) c[j] -= z * c[j - 1];
    }
    return QuarticPoly{c[1].real(), c[2].real(), c[3].real(), c[4].real()};
  }();
  // Rounding level of a Taylor coefficient b[j] of recon about cen.
  const auto taylor_floor = [&recon](C cen, int j) {
    return 512.0 * kEps * coeff_scale(recon) *
           std::pow(1.0 + std::abs(cen), static_cast<double>(4 - j));
  };

  // Stage 2: centroid gaps in (tol, 2 tol] admit both the split and the
  // merged reading.  The polynomial value at the joint centroid decides:
  // rounding-level means a genuine multiple root smeared across the gap
  // (merge); anything larger is a true near-miss (refuse to guess).
  if (clusters.size() > 1) {
    const int m = static_cast<int>(clusters.size());
    std::vector<int> zp(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) zp[static_cast<size_t>(i)] = i;
    auto zfind = [&zp](int i) {
      while (zp[static_cast<size_t>(i)] != i) i = zp[static_cast<size_t>(i)];
      return i;
    };
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double gap = std::abs(clusters[i].centroid - clusters[j].centroid);
        if (gap <= 2.0 * t_abs) zp[static_cast<size_t>(zfind(i))] = zfind(j);
      }
    std::vector<Cluster> zoned;
    for (int rep = 0; rep < m; ++rep) {
      if (zfind(rep) != rep) continue;
      std::vector<int> group;
      for (int i = 0; i < m; ++i)
        if (zfind(i) == rep) group.push_back(i);
      if (group.size() == 1) {
        zoned.push_back(clusters[static_cast<size_t>(group[0])]);
        continue;
      }
      Cluster merged;
      C sum = 0.0;
      for (int gi : group)
        for (int mi : clusters[static_cast<size_t>(gi)].members) {
          merged.members.push_back(mi);
          sum += roots[mi];
        }
      merged.centroid = sum / static_cast<double>(merged.members.size());
      const auto b = taylor_shift(recon, merged.centroid);
      if (std::abs(b[0]) > taylor_floor(merged.centroid, 0)) {
        throw AmbiguousClustering(
            "cluster gap within (tol, 2 tol] and the joint centroid does not "
            "witness a multiple root: clustering is ambiguous at tol " +
            std::to_string(tol));
      }
      zoned.push_back(std::move(merged));
    }
    clusters = std::move(zoned);
  }

  // Stage 3: multiple roots of a binary64 quartic smear into eps^(1/mu)
  // stars, far wider than tol.  Merge cluster groups into one root when the
  // group is inside the smear radius for its multiplicity AND the Taylor
  // coefficients of the reconstructed polynomial at the group centroid are
  // compatible with that multiplicity.
  const int nc = static_cast<int>(clusters.size());
  if (nc > 1) {
    const double smear_radius[5] = {0.0, 0.0, 1e-4, 1e-3, 1e-2};

    // Enumerate partitions of the clusters (at most B(4) = 15), coarsest
    // first, and accept the first whose merged groups all pass.
    std::vector<std::vector<std::vector<int>>> partitions;
    std::vector<std::vector<int>> current;
    auto recurse = [&](auto&& self, int next) -> void {
      if (next == nc) {
        partitions.push_back(current);
        return;
      }
      // index access: the recursive push_back below may reallocate current
      const size_t n_groups = current.size();
      for (size_t g = 0; g < n_groups; ++g) {
        current[g].push_back(next);
        self(self, next + 1);
        current[g].pop_back();
      }
      current.push_back({next});
      self(self, next + 1);
      current.pop_back();
    };
    recurse(recurse, 0);
    std::stable_sort(partitions.begin(), partitions.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });

    for (const auto& part : partitions) {
      if (part.size() == static_cast<size_t>(nc)) continue;  // identity = no merge
      bool ok = true;
      for (const auto& group : part) {
        if (group.size() < 2) continue;
        int mu = 0;
        C sum = 0.0;
        double diam = 0.0;
        for (int gi : group) {
          mu += static_cast<int>(clusters[gi].members.size());
          sum += clusters[gi].centroid * static_cast<double>(clusters[gi].members.size());
        }
        const C cen = sum / static_cast<double>(mu);
        for (size_t a = 0; a < group.size(); ++a)
          for (size_t b2 = a + 1; b2 < group.size(); ++b2)
            diam = std::max(diam,
                            std::abs(clusters[group[a]].centroid - clusters[group[b2]].centroid));
        if (diam > smear_radius[mu] * scale) {
          ok = false;
          break;
        }
        const auto b = taylor_shift(recon, cen);
        double reg = 0.0;  // scale of the regular part
        for (int j = mu; j <= 4; ++j) reg = std::max(reg, std::abs(b[j]));
        for (int j = 0; j < mu && ok; ++j) {
          // Smear content plus the rounding level of b[j] itself: tight stars
          // push the diam term below machine noise.
          const double bound = 100.0 * reg * static_cast<double>(binom(mu, j)) *
                                   std::pow(diam, static_cast<double>(mu - j)) +
                               taylor_floor(cen, j);
          if (std::abs(b[j]) > bound) ok = false;
        }
        if (!ok) break;
      }
      if (ok && part.size() < static_cast<size_t>(nc)) {
        std::vector<Cluster> merged;
        for (const auto& group : part) {
          Cluster cl;
          C sum = 0.0;
          for (int gi : group)
            for (int mi : clusters[gi].members) {
              cl.members.push_back(mi);
              sum += roots[mi];
            }
          cl.centroid = sum / static_cast<double>(cl.members.size());
          merged.push_back(std::move(cl));
        }
        clusters = std::move(merged);
        break;
      }
    }
  }

  // Complex clusters have no real family.
  for (const auto& cl : clusters) {
    if (std::abs(cl.centroid.imag()) > t_abs) {
      return make_unsupported(roots, tol,
                              "complex root pair near " + std::to_string(cl.centroid.real()) +
                                  " +/- " + std::to_string(std::abs(cl.centroid.imag())) + "i");
    }
  }

  RootClassification cls;
  cls.roots_raw = roots;
  cls.cluster_tol = tol;

  // Refine each cluster to its multiplicity-aware root.
  std::vector<std::pair<double, int>> refined;  // (root, multiplicity)
  for (const auto& cl : clusters) {
    const int mu = static_cast<int>(cl.members.size());
    refined.emplace_back(refine_root(recon, cl.centroid.real(), mu), mu);
  }

  // Role order: multiplicity-bearing root first, remaining descending.
  std::sort(refined.begin(), refined.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first > b.first;
  });

  std::vector<int> sig;
  for (const auto& [root, mu] : refined) sig.push_back(mu);
  if (sig == std::vector<int>{4}) cls.pattern = RootPattern::Quadruple;
  else if (sig == std::vector<int>{3, 1}) cls.pattern = RootPattern::TripleSimple;
  else if (sig == std::vector<int>{2, 2}) cls.pattern = RootPattern::DoubleDouble;
  else if (sig == std::vector<int>{2, 1, 1}) cls.pattern = RootPattern::DoubleTwoSimple;
  else cls.pattern = RootPattern::FourDistinct;

  for (const auto& [root, mu] : refined) {
    cls.alphas.push_back(root);
    cls.multiplicities.push_back(mu);
  }
  return cls;
}

}  // namespace dpnls
