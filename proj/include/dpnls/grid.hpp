#pragma once

#include <complex>
#include <vector>

#include "dpnls/families.hpp"

namespace dpnls {

// Inclusive ranges sampled with n evenly spaced points (n >= 2), row-major
// x (outer) -> y -> t (inner).
struct GridSpec {
  double x_min = -4.0, x_max = 4.0;
  int nx = 33;
  double y_min = -4.0, y_max = 4.0;
  int ny = 33;
  double t_min = 0.0, t_max = 2.0;
  int nt = 3;

  double x_at(int i) const { return nx > 1 ? x_min + i * (x_max - x_min) / (nx - 1) : x_min; }
  double y_at(int j) const { return ny > 1 ? y_min + j * (y_max - y_min) / (ny - 1) : y_min; }
  double t_at(int k) const { return nt > 1 ? t_min + k * (t_max - t_min) / (nt - 1) : t_min; }
  long total() const { return static_cast<long>(nx) * ny * nt; }
};

struct FieldSample {
  double x, y, t;
  std::complex<double> q;
  bool singular;  // evaluation hit a SingularPoint; q is meaningless
};

// OpenMP-parallel field evaluation over the grid, one sample per point.
std::vector<FieldSample> evaluate_field_grid(const SolutionDescriptor& desc, const GridSpec& g);

// Reference implementation: identical arithmetic, no threading.  Per-point
// results are bitwise equal to the parallel kernel (no reductions involved).
std::vector<FieldSample> evaluate_field_grid_serial(const SolutionDescriptor& desc,
                                                    const GridSpec& g);

}  // namespace dpnls
