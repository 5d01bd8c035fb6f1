#include "dpnls/cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <utility>
#include <vector>

#include "dpnls/errors.hpp"
#include "dpnls/figures.hpp"
#include "dpnls/quartic.hpp"
#include "dpnls/verify.hpp"

namespace dpnls::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Mode parse_mode(const std::string& name) {
  if (name == "derive") return Mode::derive;
  if (name == "roots") return Mode::roots;
  if (name == "solve") return Mode::solve;
  if (name == "eval") return Mode::eval;
  if (name == "verify") return Mode::verify;
  if (name == "figure") return Mode::figure;
  throw ValidationError("cli", "unknown mode \"" + name + "\"");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::derive: return "derive";
    case Mode::roots: return "roots";
    case Mode::solve: return "solve";
    case Mode::eval: return "eval";
    case Mode::verify: return "verify";
    case Mode::figure: return "figure";
  }
  return "?";
}

const char* pattern_name(RootPattern p) {
  switch (p) {
    case RootPattern::Quadruple: return "Quadruple";
    case RootPattern::TripleSimple: return "TripleSimple";
    case RootPattern::DoubleDouble: return "DoubleDouble";
    case RootPattern::DoubleTwoSimple: return "DoubleTwoSimple";
    case RootPattern::FourDistinct: return "FourDistinct";
    case RootPattern::Unsupported: return "Unsupported";
  }
  return "?";
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Q1: return "Q1";
    case Family::Q2: return "Q2";
    case Family::Q3: return "Q3";
    case Family::Q4: return "Q4";
    case Family::Q5: return "Q5";
    case Family::Q6: return "Q6";
    case Family::Q7: return "Q7";
  }
  return "?";
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known)
      throw ValidationError("cli", "unknown key \"" + item.key() + "\" in " + where);
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ValidationError("cli", std::string(key) + " must be a number");
  return v.get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("cli", std::string(key) + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError("cli", std::string(key) + " must be a boolean");
  return v.get<bool>();
}

}  // namespace

RunConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError("cli", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("cli", "config root must be an object");
  require_keys(j, {"mode", "params", "grid", "options", "figure_id", "output_path"}, "config");

  RunConfig c;
  if (!j.contains("mode") || !j.at("mode").is_string())
    throw ValidationError("cli", "config requires a string \"mode\"");
  c.mode = parse_mode(j.at("mode").get<std::string>());

  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw ValidationError("cli", "params must be an object");
    require_keys(p, {"m", "k", "chi1", "chi2", "omega1", "omega2", "tau0", "xi1", "xi3", "xi4"},
                 "params");
    c.params.m = get_num(p, "m", c.params.m);
    c.params.k = get_num(p, "k", c.params.k);
    c.params.chi1 = get_num(p, "chi1", c.params.chi1);
    c.params.chi2 = get_num(p, "chi2", c.params.chi2);
    c.params.omega1 = get_num(p, "omega1", c.params.omega1);
    c.params.omega2 = get_num(p, "omega2", c.params.omega2);
    c.params.tau0 = get_num(p, "tau0", c.params.tau0);
    c.params.xi1 = get_num(p, "xi1", c.params.xi1);
    c.params.xi3 = get_num(p, "xi3", c.params.xi3);
    c.params.xi4 = get_num(p, "xi4", c.params.xi4);
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object()) throw ValidationError("cli", "grid must be an object");
    require_keys(g, {"x_min", "x_max", "nx", "y_min", "y_max", "ny", "t_min", "t_max", "nt"},
                 "grid");
    GridSpec spec;
    spec.x_min = get_num(g, "x_min", spec.x_min);
    spec.x_max = get_num(g, "x_max", spec.x_max);
    spec.nx = get_int(g, "nx", spec.nx);
    spec.y_min = get_num(g, "y_min", spec.y_min);
    spec.y_max = get_num(g, "y_max", spec.y_max);
    spec.ny = get_int(g, "ny", spec.ny);
    spec.t_min = get_num(g, "t_min", spec.t_min);
    spec.t_max = get_num(g, "t_max", spec.t_max);
    spec.nt = get_int(g, "nt", spec.nt);
    if (spec.nx < 1 || spec.ny < 1 || spec.nt < 1)
      throw ValidationError("cli", "grid counts must be positive");
    c.grid = spec;
  }

  if (j.contains("options")) {
    const json& o = j.at("options");
    if (!o.is_object()) throw ValidationError("cli", "options must be an object");
    require_keys(o, {"reduced", "eta0", "branch_sign", "cluster_tol", "stencil_order", "fd_step"},
                 "options");
    c.options.reduced = get_bool(o, "reduced", c.options.reduced);
    c.options.eta0 = get_num(o, "eta0", c.options.eta0);
    c.options.branch_sign = get_int(o, "branch_sign", c.options.branch_sign);
    if (c.options.branch_sign != 1 && c.options.branch_sign != -1)
      throw ValidationError("cli", "branch_sign must be +1 or -1");
    c.cluster_tol = get_num(o, "cluster_tol", c.cluster_tol);
    if (!(c.cluster_tol > 0.0)) throw ValidationError("cli", "cluster_tol must be positive");
    c.stencil_order = get_int(o, "stencil_order", c.stencil_order);
    if (c.stencil_order != 2 && c.stencil_order != 4)
      throw ValidationError("cli", "stencil_order must be 2 or 4");
    c.fd_step = get_num(o, "fd_step", c.fd_step);
    if (!(c.fd_step > 0.0)) throw ValidationError("cli", "fd_step must be positive");
  }

  if (j.contains("figure_id")) {
    const json& v = j.at("figure_id");
    if (!v.is_number_integer()) throw ValidationError("cli", "figure_id must be an integer");
    const int id = v.get<int>();
    if (id < 1 || id > 6) throw ValidationError("cli", "figure_id must be in 1..6");
    c.figure_id = id;
  }

  if (j.contains("output_path")) {
    const json& v = j.at("output_path");
    if (!v.is_string()) throw ValidationError("cli", "output_path must be a string");
    c.output_path = v.get<std::string>();
  }
  return c;
}

namespace {

void kv(std::ostream& out, const char* key, double v) { out << key << '=' << format_double(v) << '\n'; }
void kv(std::ostream& out, const char* key, long v) { out << key << '=' << v << '\n'; }
void kv(std::ostream& out, const char* key, int v) { out << key << '=' << v << '\n'; }
void kv(std::ostream& out, const char* key, bool v) { out << key << '=' << (v ? "true" : "false") << '\n'; }
void kv(std::ostream& out, const char* key, const std::string& v) { out << key << '=' << v << '\n'; }

void check_grid_counts(const GridSpec& g) {
  if (g.nx < 2 || g.ny < 2 || g.nt < 2)
    throw ValidationError("cli", "grid counts must be >= 2 for this mode");
}

struct Pipeline {
  DerivedCoefficients derived;
  QuarticPoly quartic;
  std::array<std::complex<double>, 4> roots{};
  RootClassification cls;
  SolutionDescriptor desc;
};

Pipeline run_pipeline(const RunConfig& config) {
  Pipeline p;
  p.derived = derive_coefficients(config.params);
  p.quartic = build_quartic(config.params, p.derived);
  p.roots = find_roots(p.quartic);
  p.cls = classify_roots(p.roots, config.cluster_tol);
  p.desc = construct_solution(p.cls, config.params, p.derived, config.options);
  return p;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cli", "cannot open output file: " + path);
  return f;
}

std::string slice_path(const std::string& path) {
  const std::filesystem::path p(path);
  std::filesystem::path q = p.parent_path() / p.stem();
  q += "_t1";
  q += p.extension();
  return q.string();
}

void run_derive(const RunConfig& config, std::ostream& out) {
  const DerivedCoefficients d = derive_coefficients(config.params);
  kv(out, "tau1", d.tau1);
  kv(out, "zeta0", d.zeta0);
  kv(out, "xi2", d.xi2);
  kv(out, "xi0", d.xi0);
  kv(out, "chi3", d.chi3);
  kv(out, "omega3", d.omega3);
  kv(out, "upsilon", d.upsilon);
  kv(out, "a_squared", d.a_squared);
  kv(out, "a_const", d.a_const);
}

void run_roots(const RunConfig& config, std::ostream& out) {
  const DerivedCoefficients d = derive_coefficients(config.params);
  const QuarticPoly q = build_quartic(config.params, d);
  const auto roots = find_roots(q);
  const RootClassification cls = classify_roots(roots, config.cluster_tol);
  kv(out, "c3", q.c3);
  kv(out, "c2", q.c2);
  kv(out, "c1", q.c1);
  kv(out, "c0", q.c0);
  for (int i = 0; i < 4; ++i) {
    const std::string base = "root" + std::to_string(i + 1);
    kv(out, (base + "_re").c_str(), roots[static_cast<size_t>(i)].real());
    kv(out, (base + "_im").c_str(), roots[static_cast<size_t>(i)].imag());
  }
  kv(out, "pattern", std::string(pattern_name(cls.pattern)));
  kv(out, "cluster_tol", cls.cluster_tol);
  for (size_t i = 0; i < cls.alphas.size(); ++i) {
    kv(out, ("alpha" + std::to_string(i + 1)).c_str(), cls.alphas[i]);
    kv(out, ("mult" + std::to_string(i + 1)).c_str(), cls.multiplicities[i]);
  }
  if (!cls.detail.empty()) kv(out, "detail", cls.detail);
}

void run_solve(const RunConfig& config, std::ostream& out) {
  const Pipeline p = run_pipeline(config);
  const SolutionDescriptor& s = p.desc;
  kv(out, "family", std::string(family_name(s.family)));
  kv(out, "pattern", std::string(pattern_name(p.cls.pattern)));
  kv(out, "n_alphas", s.n_alphas);
  for (int i = 0; i < s.n_alphas; ++i)
    kv(out, ("alpha" + std::to_string(i + 1)).c_str(), s.alphas[static_cast<size_t>(i)]);
  kv(out, "tau0", s.tau0);
  kv(out, "tau1", s.tau1);
  kv(out, "eta0", s.eta0);
  kv(out, "branch_sign", s.branch_sign);
  kv(out, "reduced", s.reduced);
  kv(out, "m", s.m);
  kv(out, "k", s.k);
  kv(out, "a_squared", s.a_squared);
  kv(out, "exponent", s.exponent);
  kv(out, "chi1", s.phase[0]);
  kv(out, "chi2", s.phase[1]);
  kv(out, "chi3", s.phase[2]);
  kv(out, "omega1", s.wave[0]);
  kv(out, "omega2", s.wave[1]);
  kv(out, "omega3", s.wave[2]);
  kv(out, "from_derived", s.from_derived);
  kv(out, "cluster_tol", s.cluster_tol);
  kv(out, "a1_re", s.a1_const.real());
  kv(out, "a1_im", s.a1_const.imag());
  kv(out, "a2_pow", s.a2_pow);
  kv(out, "b_width_re", s.b_width.real());
  kv(out, "b_width_im", s.b_width.imag());
  kv(out, "d_shift", s.d_shift);
  kv(out, "a3_pow", s.a3_pow);
  kv(out, "m_const", s.m_const);
  kv(out, "n_const", s.n_const);
  kv(out, "l_mod", s.l_mod);
}

void run_eval(const RunConfig& config, std::ostream& out) {
  if (!config.grid) throw ValidationError("cli", "eval mode requires a grid");
  check_grid_counts(*config.grid);
  if (!config.output_path) throw ValidationError("cli", "eval mode requires output_path");
  const Pipeline p = run_pipeline(config);
  const std::vector<FieldSample> samples = evaluate_field_grid(p.desc, *config.grid);

  std::ofstream f = open_output(*config.output_path);
  f << "x,y,t,re_q,im_q,abs_q\n";
  long singular = 0;
  long rows = 0;
  for (const FieldSample& s : samples) {
    if (s.singular) {
      ++singular;
      continue;
    }
    f << format_double(s.x) << ',' << format_double(s.y) << ',' << format_double(s.t) << ','
      << format_double(s.q.real()) << ',' << format_double(s.q.imag()) << ','
      << format_double(std::abs(s.q)) << '\n';
    ++rows;
  }
  kv(out, "family", std::string(family_name(p.desc.family)));
  kv(out, "n_points", static_cast<long>(samples.size()));
  kv(out, "n_singular", singular);
  kv(out, "n_rows", rows);
  kv(out, "output", *config.output_path);
}

void write_verify_report(std::ostream& out, double identity, const ResidualReport& rep) {
  kv(out, "identity_residual", identity);
  kv(out, "sup_norm", rep.sup_norm);
  kv(out, "mean_abs", rep.mean_abs);
  kv(out, "n_points", rep.n_points);
  kv(out, "n_excluded", rep.n_excluded);
  kv(out, "step", rep.step);
  kv(out, "stencil_order", rep.stencil_order);
  kv(out, "converged_order", rep.converged_order);
}

void run_verify(const RunConfig& config, std::ostream& out) {
  if (!config.grid) throw ValidationError("cli", "verify mode requires a grid");
  check_grid_counts(*config.grid);
  const Pipeline p = run_pipeline(config);
  const double identity =
      ode_identity_residual(config.params, p.derived, default_gamma_samples());
  const ResidualReport rep =
      pde_residual(p.desc, *config.grid, config.fd_step, config.stencil_order);
  write_verify_report(out, identity, rep);
  if (config.output_path) {
    std::ofstream f = open_output(*config.output_path);
    write_verify_report(f, identity, rep);
  }
}

void run_figure(const RunConfig& config, std::ostream& out) {
  if (!config.figure_id) throw ValidationError("cli", "figure mode requires figure_id");
  const FigureSpec spec = figure_spec(*config.figure_id);
  const GridSpec grid = config.grid.value_or(spec.default_grid);
  check_grid_counts(grid);
  if (!config.output_path) throw ValidationError("cli", "figure mode requires output_path");

  std::ofstream f = open_output(*config.output_path);
  f << "x,y,t,re_q,im_q,abs_q\n";
  long singular = 0;
  long rows = 0;
  for (int ix = 0; ix < grid.nx; ++ix)
    for (int iy = 0; iy < grid.ny; ++iy)
      for (int it = 0; it < grid.nt; ++it) {
        const double x = grid.x_at(ix), y = grid.y_at(iy), t = grid.t_at(it);
        try {
          const std::complex<double> q = figure_field(spec.id, x, y, t);
          f << format_double(x) << ',' << format_double(y) << ',' << format_double(t) << ','
            << format_double(q.real()) << ',' << format_double(q.imag()) << ','
            << format_double(std::abs(q)) << '\n';
          ++rows;
        } catch (const SingularPoint&) {
          ++singular;
        }
      }

  const std::string slice = slice_path(*config.output_path);
  std::ofstream fs = open_output(slice);
  fs << "x,y,re_q,im_q,abs_q\n";
  long slice_singular = 0;
  long slice_rows = 0;
  for (int ix = 0; ix < grid.nx; ++ix)
    for (int iy = 0; iy < grid.ny; ++iy) {
      const double x = grid.x_at(ix), y = grid.y_at(iy);
      try {
        const std::complex<double> q = figure_field(spec.id, x, y, 1.0);
        fs << format_double(x) << ',' << format_double(y) << ',' << format_double(q.real()) << ','
           << format_double(q.imag()) << ',' << format_double(std::abs(q)) << '\n';
        ++slice_rows;
      } catch (const SingularPoint&) {
        ++slice_singular;
      }
    }

  kv(out, "figure_id", spec.id);
  kv(out, "family", spec.family);
  kv(out, "component", spec.component);
  kv(out, "n_points", static_cast<long>(grid.total()));
  kv(out, "n_singular", singular);
  kv(out, "n_rows", rows);
  kv(out, "slice_rows", slice_rows);
  kv(out, "slice_singular", slice_singular);
  kv(out, "output", *config.output_path);
  kv(out, "slice_output", slice);
}

void write_error(std::ostream& out, const Error& e) {
  const json doc = {{"error", e.code()}, {"module", e.module()}, {"message", e.what()}};
  out << doc.dump() << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  try {
    switch (config.mode) {
      case Mode::derive: run_derive(config, out); break;
      case Mode::roots: run_roots(config, out); break;
      case Mode::solve: run_solve(config, out); break;
      case Mode::eval: run_eval(config, out); break;
      case Mode::verify: run_verify(config, out); break;
      case Mode::figure: run_figure(config, out); break;
    }
    return 0;
  } catch (const ValidationError& e) {
    write_error(out, e);
    return 2;
  } catch (const Error& e) {
    write_error(out, e);
    return 3;
  } catch (const std::exception& e) {
    const json doc = {{"error", "InternalError"}, {"module", "cli"}, {"message", e.what()}};
    out << doc.dump() << '\n';
    return 3;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"traveling-wave solution families of the dual power-law Schrodinger equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double cluster_tol = 1e-6;
  double fd_step = 1e-3;
  int stencil_order = 4;

  struct SubFlags {
    CLI::Option* config = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* cluster = nullptr;
    CLI::Option* step = nullptr;
    CLI::Option* stencil = nullptr;
  };
  static constexpr std::array<const char*, 6> kModeNames = {"derive", "roots",  "solve",
                                                            "eval",   "verify", "figure"};
  static constexpr std::array<const char*, 6> kModeHelp = {
      "solve the coefficient system and print the derived constants",
      "build the trial quartic, find and classify its roots",
      "construct the solution descriptor for the classified pattern",
      "sample q(x,y,t) over a grid and write CSV",
      "report the algebraic and finite-difference residuals",
      "write a preset surface dataset (3D grid plus t=1 slice)"};
  std::array<std::pair<CLI::App*, SubFlags>, 6> subs{};
  for (size_t i = 0; i < kModeNames.size(); ++i) {
    CLI::App* sub = app.add_subcommand(kModeNames[i], kModeHelp[i]);
    SubFlags flags;
    flags.config = sub->add_option("--config", config_path, "JSON run configuration");
    flags.out = sub->add_option("--out", out_path, "output artifact path");
    flags.cluster = sub->add_option("--cluster-tol", cluster_tol, "root clustering tolerance");
    flags.step = sub->add_option("--fd-step", fd_step, "finite-difference step");
    flags.stencil = sub->add_option("--stencil-order", stencil_order, "stencil order (2 or 4)");
    subs[i] = {sub, flags};
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    size_t chosen = 0;
    for (size_t i = 0; i < subs.size(); ++i)
      if (subs[i].first->parsed()) chosen = i;
    const SubFlags& flags = subs[chosen].second;
    const Mode mode = parse_mode(kModeNames[chosen]);

    RunConfig config;
    if (flags.config->count() > 0) {
      std::ifstream f(config_path, std::ios::binary);
      if (!f) throw ValidationError("cli", "cannot read config file: " + config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      config = parse_config_text(ss.str());
      if (config.mode != mode)
        throw ValidationError("cli", std::string("config mode \"") + mode_name(config.mode) +
                                         "\" conflicts with subcommand \"" + mode_name(mode) +
                                         "\"");
    }
    config.mode = mode;
    if (flags.out->count() > 0) config.output_path = out_path;
    if (flags.cluster->count() > 0) {
      if (!(cluster_tol > 0.0)) throw ValidationError("cli", "cluster_tol must be positive");
      config.cluster_tol = cluster_tol;
    }
    if (flags.step->count() > 0) {
      if (!(fd_step > 0.0)) throw ValidationError("cli", "fd_step must be positive");
      config.fd_step = fd_step;
    }
    if (flags.stencil->count() > 0) {
      if (stencil_order != 2 && stencil_order != 4)
        throw ValidationError("cli", "stencil_order must be 2 or 4");
      config.stencil_order = stencil_order;
    }
    return run(config, std::cout);
  } catch (const ValidationError& e) {
    write_error(std::cout, e);
    return 2;
  } catch (const Error& e) {
    write_error(std::cout, e);
    return 3;
  }
}

}  // namespace dpnls::cli
