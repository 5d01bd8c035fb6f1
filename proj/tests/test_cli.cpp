#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dpnls/cli.hpp"
#include "dpnls/errors.hpp"
#include "dpnls/quartic.hpp"
#include "dpnls/verify.hpp"
#include "golden.hpp"
#include "reference_values.hpp"

using namespace dpnls;
using cli::parse_config_text;
using cli::RunConfig;

namespace {

const char* kGoldenParams =
    R"("params": {"chi1": 1, "chi2": 2, "omega1": -1, "omega2": 1})";

std::string golden_config(const std::string& mode, const std::string& extra = "") {
  std::string s = "{\"mode\": \"" + mode + "\", " + kGoldenParams;
  if (!extra.empty()) s += ", " + extra;
  s += "}";
  return s;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string get_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() /
             ("dpnls_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;  // header
    }
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

GridSpec small_grid() {
  GridSpec g;
  g.x_min = -1.0;
  g.x_max = 1.0;
  g.nx = 5;
  g.y_min = -1.0;
  g.y_max = 1.0;
  g.ny = 5;
  g.t_min = 0.0;
  g.t_max = 0.5;
  g.nt = 3;
  return g;
}

}  // namespace

TEST_CASE("config parsing fills defaults") {
  const RunConfig c = parse_config_text(R"({"mode": "derive"})");
  CHECK(c.mode == cli::Mode::derive);
  CHECK(c.params.m == 1.0);
  CHECK(c.params.omega1 == 1.0);
  CHECK_FALSE(c.grid.has_value());
  CHECK_FALSE(c.figure_id.has_value());
  CHECK_FALSE(c.output_path.has_value());
  CHECK(c.cluster_tol == 1e-6);
  CHECK(c.stencil_order == 4);
  CHECK(c.fd_step == 1e-3);
}

TEST_CASE("config parsing reads every section") {
  const std::string text = R"({
    "mode": "eval",
    "params": {"m": 0.5, "k": 2, "chi1": 1, "chi2": 2, "omega1": -1, "omega2": 1,
               "tau0": 0.3, "xi1": 0.1, "xi3": 1.5, "xi4": 2.5},
    "grid": {"x_min": -2, "x_max": 2, "nx": 9, "y_min": -1, "y_max": 1, "ny": 5,
             "t_min": 0, "t_max": 1, "nt": 3},
    "options": {"reduced": true, "eta0": 0.25, "branch_sign": -1,
                "cluster_tol": 1e-8, "stencil_order": 2, "fd_step": 0.01},
    "output_path": "field.csv"
  })";
  const RunConfig c = parse_config_text(text);
  CHECK(c.mode == cli::Mode::eval);
  CHECK(c.params.m == 0.5);
  CHECK(c.params.xi4 == 2.5);
  REQUIRE(c.grid.has_value());
  CHECK(c.grid->nx == 9);
  CHECK(c.grid->t_max == 1.0);
  CHECK(c.options.reduced);
  CHECK(c.options.eta0 == 0.25);
  CHECK(c.options.branch_sign == -1);
  CHECK(c.cluster_tol == 1e-8);
  CHECK(c.stencil_order == 2);
  CHECK(c.fd_step == 0.01);
  REQUIRE(c.output_path.has_value());
  CHECK(*c.output_path == "field.csv");
}

TEST_CASE("config parsing rejects malformed input") {
  const char* bad[] = {
      "not json",
      "[1, 2]",
      "{}",
      R"({"mode": "frobnicate"})",
      R"({"mode": 3})",
      R"({"mode": "derive", "oops": 1})",
      R"({"mode": "derive", "params": {"mass": 1}})",
      R"({"mode": "derive", "params": 7})",
      R"({"mode": "derive", "params": {"m": "one"}})",
      R"({"mode": "eval", "grid": {"x_mid": 0}})",
      R"({"mode": "eval", "grid": {"nx": 0}})",
      R"({"mode": "eval", "grid": {"nx": 2.5}})",
      R"({"mode": "solve", "options": {"real_only": true}})",
      R"({"mode": "solve", "options": {"branch_sign": 2}})",
      R"({"mode": "solve", "options": {"cluster_tol": 0}})",
      R"({"mode": "verify", "options": {"stencil_order": 3}})",
      R"({"mode": "verify", "options": {"fd_step": -0.1}})",
      R"({"mode": "figure", "figure_id": 0})",
      R"({"mode": "figure", "figure_id": 7})",
      R"({"mode": "figure", "figure_id": 2.5})",
      R"({"mode": "eval", "output_path": 42})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config_text(text), ValidationError);
  }
}

TEST_CASE("derive mode prints the derived constants") {
  const RunConfig c = parse_config_text(golden_config("derive"));
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  const std::string s = out.str();
  CHECK(contains(s, "tau1=5.5\n"));
  CHECK(contains(s, "omega3=-1\n"));
  CHECK(contains(s, "upsilon=11\n"));
  CHECK(contains(s, "chi3=-1.0833333333333333"));
  CHECK(contains(s, "a_squared=-0.0247933884297520"));
}

TEST_CASE("roots mode classifies the golden quartic") {
  const RunConfig c = parse_config_text(golden_config("roots"));
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  const std::string s = out.str();
  CHECK(contains(s, "pattern=DoubleTwoSimple\n"));
  CHECK(contains(s, "c2=0.2066115702479"));
  CHECK(get_value(s, "mult1") == "2");
  CHECK(contains(get_value(s, "alpha1"), "-0.18181818181818"));
}

TEST_CASE("solve mode prints the descriptor") {
  const RunConfig c = parse_config_text(golden_config("solve"));
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  const std::string s = out.str();
  CHECK(contains(s, "family=Q4\n"));
  CHECK(contains(s, "from_derived=true\n"));
  CHECK(contains(s, "reduced=false\n"));
  CHECK(get_value(s, "n_alphas") == "3");
  CHECK(contains(get_value(s, "b_width_re"), "2.3804761428"));
}

TEST_CASE("eval mode writes a deterministic CSV") {
  RunConfig c = parse_config_text(golden_config("eval"));
  c.grid = small_grid();
  const auto path_a = scratch_dir() / "eval_a.csv";
  const auto path_b = scratch_dir() / "eval_b.csv";

  c.output_path = path_a.string();
  std::ostringstream out_a;
  REQUIRE(cli::run(c, out_a) == 0);
  c.output_path = path_b.string();
  std::ostringstream out_b;
  REQUIRE(cli::run(c, out_b) == 0);

  CHECK(get_value(out_a.str(), "family") == "Q4");
  CHECK(get_value(out_a.str(), "n_points") == "75");
  CHECK(get_value(out_a.str(), "n_singular") == "0");
  CHECK(get_value(out_a.str(), "n_rows") == "75");

  const std::string csv_a = read_file(path_a);
  CHECK(csv_a == read_file(path_b));
  CHECK(csv_a.rfind("x,y,t,re_q,im_q,abs_q\n", 0) == 0);
  const auto rows = data_lines(csv_a);
  REQUIRE(rows.size() == 75);

  // first row reproduces the field value losslessly
  const auto p = testfx::golden_params();
  const auto d = derive_coefficients(p);
  const auto cls = classify_roots(find_roots(build_quartic(p, d)), 1e-6);
  const auto desc = construct_solution(cls, p, d);
  const GridSpec g = small_grid();
  const auto q = evaluate_field(desc, g.x_at(0), g.y_at(0), g.t_at(0));
  std::istringstream row(rows.front());
  std::string cell;
  std::vector<double> vals;
  while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
  REQUIRE(vals.size() == 6);
  CHECK(vals[0] == g.x_at(0));
  CHECK(vals[3] == q.real());
  CHECK(vals[4] == q.imag());
}

TEST_CASE("printed doubles round-trip") {
  for (double v : {ref::golden_chi3, ref::q4_field_q_re, 0.1, 1.0 / 3.0, -2.5e-17}) {
    CAPTURE(v);
    CHECK(std::stod(cli::format_double(v)) == v);
  }
}

TEST_CASE("verify mode reports residuals") {
  RunConfig c = parse_config_text(golden_config("verify"));
  c.grid = small_grid();
  c.fd_step = 0.02;
  const auto report_path = scratch_dir() / "verify.txt";
  c.output_path = report_path.string();
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  const std::string s = out.str();
  CHECK(contains(s, "identity_residual="));
  CHECK(get_value(s, "n_excluded") == "0");
  CHECK(get_value(s, "stencil_order") == "4");
  CHECK(std::stod(get_value(s, "identity_residual")) < 1e-12);
  CHECK(std::stod(get_value(s, "sup_norm")) < 5e-2);
  // the report file mirrors stdout
  CHECK(read_file(report_path) == s);
}

TEST_CASE("errors map to exit codes and JSON lines") {
  SUBCASE("missing grid is a validation error") {
    const RunConfig c = parse_config_text(golden_config("eval"));
    std::ostringstream out;
    CHECK(cli::run(c, out) == 2);
    CHECK(out.str().front() == '{');
    CHECK(contains(out.str(), "\"error\":\"ValidationError\""));
  }
  SUBCASE("invalid params fail derivation") {
    const RunConfig c =
        parse_config_text(R"({"mode": "derive", "params": {"xi4": 0}})");
    std::ostringstream out;
    CHECK(cli::run(c, out) == 2);
    CHECK(contains(out.str(), "\"module\":\"params\""));
  }
  SUBCASE("complex root pairs are unsupported") {
    // xi1 = 1 leaves the double root in place but pushes the residual
    // quadratic's discriminant negative
    const RunConfig c = parse_config_text(
        R"({"mode": "solve", "params": {"chi1": 1, "chi2": 2, "omega1": -1, "omega2": 1, "xi1": 1}})");
    std::ostringstream out;
    CHECK(cli::run(c, out) == 3);
    CHECK(contains(out.str(), "\"error\":\"UnsupportedPattern\""));
    CHECK(contains(out.str(), "\"module\":\"quartic\""));
  }
  SUBCASE("figure mode needs figure_id and output") {
    std::ostringstream out;
    CHECK(cli::run(parse_config_text(R"({"mode": "figure"})"), out) == 2);
    std::ostringstream out2;
    CHECK(cli::run(parse_config_text(R"({"mode": "figure", "figure_id": 1})"), out2) == 2);
  }
}

TEST_CASE("figure mode writes the surface and its t=1 slice") {
  RunConfig c = parse_config_text(R"({"mode": "figure", "figure_id": 1})");
  GridSpec g;  // keep defaults for ranges, shrink the counts
  g.nx = 5;
  g.ny = 5;
  g.nt = 3;
  c.grid = g;
  const auto path = scratch_dir() / "fig1.csv";
  c.output_path = path.string();
  std::ostringstream out;
  REQUIRE(cli::run(c, out) == 0);
  const std::string s = out.str();
  CHECK(get_value(s, "figure_id") == "1");
  CHECK(get_value(s, "component") == "imag");
  const long rows = std::stol(get_value(s, "n_rows"));
  const long singular = std::stol(get_value(s, "n_singular"));
  CHECK(rows + singular == 75);
  CHECK(singular > 0);  // the coth kernel has a pole line in this window

  const auto slice_file = scratch_dir() / "fig1_t1.csv";
  CHECK(get_value(s, "slice_output") == slice_file.string());
  const std::string csv3 = read_file(path);
  const std::string csv2 = read_file(slice_file);
  CHECK(csv2.rfind("x,y,re_q,im_q,abs_q\n", 0) == 0);

  // rows of the 3D file at t=1 equal the slice rows with the t column removed
  std::vector<std::string> plane;
  for (const std::string& line : data_lines(csv3)) {
    size_t p1 = line.find(',');
    size_t p2 = line.find(',', p1 + 1);
    size_t p3 = line.find(',', p2 + 1);
    if (line.substr(p2 + 1, p3 - p2 - 1) == "1")
      plane.push_back(line.substr(0, p2) + line.substr(p3));
  }
  const auto slice_rows = data_lines(csv2);
  REQUIRE(plane.size() == slice_rows.size());
  for (size_t i = 0; i < plane.size(); ++i) CHECK(plane[i] == slice_rows[i]);

  // odd figure ids carry the oscillation in the imaginary part
  bool has_imag = false;
  for (const std::string& line : data_lines(csv3)) {
    size_t pos = 0;
    for (int field = 0; field < 4; ++field) pos = line.find(',', pos) + 1;
    const double im = std::stod(line.substr(pos, line.find(',', pos) - pos));
    if (std::abs(im) > 1e-12) has_imag = true;
  }
  CHECK(has_imag);
}

#ifdef DPNLS_BIN
namespace {

int run_binary(const std::string& args, const std::filesystem::path& stdout_path) {
  const std::string cmd =
      std::string(DPNLS_BIN) + " " + args + " > " + stdout_path.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("binary end-to-end") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "golden_derive.json";
  std::ofstream(cfg) << golden_config("derive");
  const auto log = dir / "stdout.txt";

  SUBCASE("derive subcommand") {
    CHECK(run_binary("derive --config " + cfg.string(), log) == 0);
    CHECK(contains(read_file(log), "tau1=5.5"));
  }
  SUBCASE("missing subcommand fails parse") { CHECK(run_binary("", log) == 2); }
  SUBCASE("unreadable config") {
    CHECK(run_binary("derive --config " + (dir / "absent.json").string(), log) == 2);
    CHECK(contains(read_file(log), "ValidationError"));
  }
  SUBCASE("mode conflict") {
    CHECK(run_binary("solve --config " + cfg.string(), log) == 2);
    CHECK(contains(read_file(log), "conflicts"));
  }
  SUBCASE("flag validation") {
    CHECK(run_binary("roots --config " + cfg.string() + " --cluster-tol 0", log) == 2);
    CHECK(run_binary("verify --config " + cfg.string() + " --stencil-order 3", log) == 2);
  }
  SUBCASE("cluster tolerance flag reaches the classifier") {
    const auto cfg_roots = dir / "golden_roots.json";
    std::ofstream(cfg_roots) << golden_config("roots");
    CHECK(run_binary("roots --config " + cfg_roots.string() + " --cluster-tol 1e-3", log) == 0);
    CHECK(contains(read_file(log), "cluster_tol=0.001"));
  }
  SUBCASE("figure subcommand writes both artifacts") {
    const auto cfg_fig = dir / "fig2.json";
    std::ofstream(cfg_fig)
        << R"({"mode": "figure", "figure_id": 2,
               "grid": {"nx": 5, "ny": 5, "nt": 3}})";
    const auto out_csv = dir / "fig2.csv";
    CHECK(run_binary("figure --config " + cfg_fig.string() + " --out " + out_csv.string(),
                     log) == 0);
    CHECK(std::filesystem::exists(out_csv));
    CHECK(std::filesystem::exists(dir / "fig2_t1.csv"));
  }
}
#endif
