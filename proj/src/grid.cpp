#include "dpnls/grid.hpp"

#include <atomic>
#include <limits>

#include "dpnls/errors.hpp"

namespace dpnls {

namespace {

// Shared per-point kernel so the parallel and serial paths are arithmetic
// twins; exceptions must not cross the OpenMP region boundary.
inline FieldSample sample_point(const SolutionDescriptor& desc, const GridSpec& g, long idx) {
  const int iy_span = g.ny, it_span = g.nt;
  const int ix = static_cast<int>(idx / (static_cast<long>(iy_span) * it_span));
  const int iy = static_cast<int>((idx / it_span) % iy_span);
  const int it = static_cast<int>(idx % it_span);
  FieldSample s{g.x_at(ix), g.y_at(iy), g.t_at(it), {0.0, 0.0}, false};
  try {
    s.q = evaluate_field(desc, s.x, s.y, s.t);
  } catch (const SingularPoint&) {
    s.singular = true;
    s.q = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  return s;
}

}  // namespace

std::vector<FieldSample> evaluate_field_grid(const SolutionDescriptor& desc, const GridSpec& g) {
  const long n = g.total();
  std::vector<FieldSample> out(static_cast<size_t>(n));
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < n; ++idx) {
    try {
      out[static_cast<size_t>(idx)] = sample_point(desc, g, idx);
    } catch (...) {
      failed.store(true);
    }
  }
  if (failed.load()) {
    throw NumericError("EvaluationFailure", "families", "field evaluation failed on the grid");
  }
  return out;
}

std::vector<FieldSample> evaluate_field_grid_serial(const SolutionDescriptor& desc,
                                                    const GridSpec& g) {
  const long n = g.total();
  std::vector<FieldSample> out(static_cast<size_t>(n));
  for (long idx = 0; idx < n; ++idx) {
    out[static_cast<size_t>(idx)] = sample_point(desc, g, idx);
  }
  return out;
}

}  // namespace dpnls
