#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dpnls/families.hpp"
#include "dpnls/grid.hpp"
#include "dpnls/params.hpp"

namespace dpnls::cli {

enum class Mode { derive, roots, solve, eval, verify, figure };

struct RunConfig {
  Mode mode = Mode::derive;
  ProblemParams params;
  std::optional<GridSpec> grid;
  SolutionOptions options;
  double cluster_tol = 1e-6;
  int stencil_order = 4;
  double fd_step = 1e-3;
  std::optional<int> figure_id;
  std::optional<std::string> output_path;
};

// Strict JSON ingestion: unknown keys anywhere are a ValidationError, as are
// type mismatches and out-of-range enums.
RunConfig parse_config_text(const std::string& json_text);

// Executes one mode.  Human/machine documents go to `out`; CSV artifacts go
// to config.output_path.  Library errors become a single-line JSON error
// document on `out`; the return value is the process exit code
// (0 ok, 2 validation, 3 numeric).
int run(const RunConfig& config, std::ostream& out);

// Full argv surface: subcommand = mode, --config/--out/--cluster-tol/
// --fd-step/--stencil-order flags.
int main_entry(int argc, char** argv);

// 17-significant-digit shortest form used for every numeric export.
std::string format_double(double v);

}  // namespace dpnls::cli
