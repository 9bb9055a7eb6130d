#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "cutfrac/analysis.hpp"
#include "cutfrac/errors.hpp"
#include "cutfrac/io.hpp"

using namespace cutfrac;

namespace {

struct CliOptions {
  int case_id = 1;
  std::string formulation = "robust";
  int nx = 11;
  int levels = 4;
  std::optional<double> alpha, xi, beta, gamma, d;
  std::optional<double> crack_x, arc_cx, arc_cy, arc_radius, a_gamma;
  std::optional<double> a_low, a_high, band_lo, band_hi;
  std::optional<int> bulk_jumps, band_jumps, band_normal;
  bool refined_tau = false;
  std::string solver = "direct";
  double cg_tol = 1e-10;
  bool strict_beta = false;
  bool with_cond = false;
  std::string sweep = "h";
  std::vector<double> alphas{1.0, 1e2, 1e4, 1e6};
  std::string out_dir = ".";
  std::string config_path;
};

std::string trim(std::string s) {
  const auto keep = [](unsigned char c) { return std::isspace(c) == 0; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), keep));
  s.erase(std::find_if(s.rbegin(), s.rend(), keep).base(), s.end());
  return s;
}

// CLI11 only reads config files attached to the top-level app, so the flag is a
// plain option on each subcommand and the file is applied here after parsing.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::unordered_set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string here = path + ":" + std::to_string(lineno);
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s[0] == '[') throw ConfigError(here + ": sections are not supported, use flat key=value lines");
    const std::size_t eq = s.find('=');
    const std::string key = trim(s.substr(0, eq));
    const std::string value = eq == std::string::npos ? "true" : trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(here + ": missing key");
    if (key == "config") throw ConfigError(here + ": config files cannot nest");
    if (!seen.insert(key).second) throw ConfigError(here + ": duplicate key " + key);
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (!opt) throw ConfigError(here + ": unknown key " + key);
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(here + ": " + e.what());
    }
  }
}

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--config", o.config_path, "key=value config file; command-line flags win");
  cmd->add_option("--case", o.case_id, "1 manufactured, 2 heterogeneous crack, 3 quarter circle")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--formulation", o.formulation, "robust | standard")
      ->check(CLI::IsMember({"robust", "standard"}));
  cmd->add_option("--nx", o.nx, "cells across at the coarsest level (odd keeps the crack off grid lines)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--levels", o.levels, "refinement levels, nx doubling as 2nx+1")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.alpha, "coupling strength (case 1 only; cases 2/3 derive it from d)");
  cmd->add_option("--xi", o.xi, "coupling asymmetry, must be > 1/2");
  cmd->add_option("--beta", o.beta, "interface penalty (default 10)");
  cmd->add_option("--gamma", o.gamma, "ghost penalty scaling (default 1)");
  cmd->add_option("--d", o.d, "crack thickness (case 3 only)");
  cmd->add_option("--crack-x", o.crack_x, "crack abscissa (case 2 only)");
  cmd->add_option("--arc-cx", o.arc_cx, "arc center x (case 3 only)");
  cmd->add_option("--arc-cy", o.arc_cy, "arc center y (case 3 only)");
  cmd->add_option("--arc-radius", o.arc_radius, "arc radius (case 3 only)");
  cmd->add_option("--a-gamma", o.a_gamma, "crack permeability (case 3 only)");
  cmd->add_option("--a-low", o.a_low, "blocking-section permeability (case 2 only)");
  cmd->add_option("--a-high", o.a_high, "open-section permeability (case 2 only)");
  cmd->add_option("--band-lo", o.band_lo, "blocking section lower y (case 2 only)");
  cmd->add_option("--band-hi", o.band_hi, "blocking section upper y (case 2 only)");
  cmd->add_option("--bulk-jumps", o.bulk_jumps, "bulk face-jump stabilization 0|1")
      ->check(CLI::Range(0, 1));
  cmd->add_option("--band-jumps", o.band_jumps, "band face-jump stabilization 0|1")
      ->check(CLI::Range(0, 1));
  cmd->add_option("--band-normal", o.band_normal, "band normal-gradient stabilization 0|1")
      ->check(CLI::Range(0, 1));
  cmd->add_flag("--refined-tau", o.refined_tau, "per-direction beta in the tau penalty");
  cmd->add_option("--solver", o.solver, "direct | cg")->check(CLI::IsMember({"direct", "cg"}));
  cmd->add_option("--cg-tol", o.cg_tol, "CG relative residual tolerance");
  cmd->add_flag("--strict-beta", o.strict_beta, "fail instead of warn when beta is too small");
  cmd->add_flag("--cond", o.with_cond, "estimate the condition number too");
  cmd->add_option("--out", o.out_dir, "output directory");
}

struct BuiltCase {
  CaseSpec cs;
  std::vector<std::string> geo_echo;
};

void reject(bool used, const char* flag, int case_id) {
  if (used)
    throw ConfigError(std::string(flag) + " does not apply to case " + std::to_string(case_id));
}

BuiltCase build_case(const CliOptions& o) {
  BuiltCase built;
  const bool any_arc = o.arc_cx || o.arc_cy || o.arc_radius || o.a_gamma;
  const bool any_crack2 = o.crack_x || o.a_low || o.a_high || o.band_lo || o.band_hi;
  switch (o.case_id) {
    case 1: {
      reject(o.d.has_value(), "--d", 1);
      reject(any_arc, "--arc-*/--a-gamma", 1);
      reject(any_crack2, "--crack-x/--a-low/--a-high/--band-*", 1);
      built.cs = case_manufactured();
      break;
    }
    case 2: {
      reject(o.alpha.has_value(), "--alpha", 2);
      reject(o.d.has_value(), "--d", 2);
      reject(any_arc, "--arc-*/--a-gamma", 2);
      HeterogeneousCrackGeometry g;
      if (o.crack_x) g.crack_x = *o.crack_x;
      if (o.a_low) g.a_low = *o.a_low;
      if (o.a_high) g.a_high = *o.a_high;
      if (o.band_lo) g.band_lo = *o.band_lo;
      if (o.band_hi) g.band_hi = *o.band_hi;
      built.cs = case_heterogeneous_crack(o.gamma.value_or(1.0), g);
      built.geo_echo = {"crack_x=" + format_sig(g.crack_x), "a_low=" + format_sig(g.a_low),
                        "a_high=" + format_sig(g.a_high), "band_lo=" + format_sig(g.band_lo),
                        "band_hi=" + format_sig(g.band_hi), "d=" + format_sig(g.d)};
      break;
    }
    default: {
      reject(o.alpha.has_value(), "--alpha", 3);
      reject(any_crack2, "--crack-x/--a-low/--a-high/--band-*", 3);
      QuarterCircleGeometry g;
      if (o.arc_cx) g.center.x() = *o.arc_cx;
      if (o.arc_cy) g.center.y() = *o.arc_cy;
      if (o.arc_radius) g.radius = *o.arc_radius;
      if (o.a_gamma) g.a_gamma = *o.a_gamma;
      const double d = o.d.value_or(0.01);
      built.cs = case_quarter_circle(d, g);
      built.geo_echo = {"arc_cx=" + format_sig(g.center.x()), "arc_cy=" + format_sig(g.center.y()),
                        "arc_radius=" + format_sig(g.radius), "a_gamma=" + format_sig(g.a_gamma),
                        "d=" + format_sig(d)};
      break;
    }
  }
  return built;
}

RunSettings build_settings(const CaseSpec& cs, const CliOptions& o) {
  RunSettings s = settings_for(cs);
  s.formulation = o.formulation == "standard" ? Formulation::Standard : Formulation::Robust;
  s.nx = o.nx;
  if (o.alpha) s.alpha = o.alpha;
  if (o.xi) s.xi = *o.xi;
  if (o.beta) s.beta = *o.beta;
  if (o.gamma) s.gamma = *o.gamma;
  if (o.bulk_jumps) s.stab.bulk_jumps = *o.bulk_jumps != 0;
  if (o.band_jumps) s.stab.band_jumps = *o.band_jumps != 0;
  if (o.band_normal) s.stab.band_normal = *o.band_normal != 0;
  s.refined_tau = o.refined_tau;
  s.solver = o.solver == "cg" ? SolverKind::Cg : SolverKind::Direct;
  s.cg_tol = o.cg_tol;
  s.strict_beta = o.strict_beta;
  return s;
}

std::vector<std::string> echo_config(const std::string& command, const BuiltCase& built,
                                     const RunSettings& s, const CliOptions& o) {
  std::vector<std::string> e;
  e.push_back("cutfrac " + command);
  e.push_back("case=" + built.cs.name);
  for (const std::string& line : built.geo_echo) e.push_back(line);
  e.push_back(std::string("formulation=") +
              (s.formulation == Formulation::Robust ? "robust" : "standard"));
  e.push_back("nx0=" + std::to_string(o.nx));
  if (command == "convergence" || (command == "condition" && o.sweep == "h"))
    e.push_back("levels=" + std::to_string(o.levels));
  e.push_back("alpha=" + (s.alpha ? format_sig(*s.alpha) : "per-case"));
  e.push_back("xi=" + format_sig(s.xi));
  e.push_back("beta=" + format_sig(s.beta));
  e.push_back("gamma=" + format_sig(s.gamma));
  e.push_back("bulk_jumps=" + std::to_string(s.stab.bulk_jumps ? 1 : 0));
  e.push_back("band_jumps=" + std::to_string(s.stab.band_jumps ? 1 : 0));
  e.push_back("band_normal=" + std::to_string(s.stab.band_normal ? 1 : 0));
  e.push_back("refined_tau=" + std::to_string(s.refined_tau ? 1 : 0));
  e.push_back("solver=" + o.solver);
  if (o.solver == "cg") e.push_back("cg_tol=" + format_sig(o.cg_tol));
  e.push_back("strict_beta=" + std::to_string(s.strict_beta ? 1 : 0));
  if (command == "condition") {
    e.push_back("sweep=" + o.sweep);
    if (o.sweep == "alpha") {
      std::string line = "alphas=";
      for (size_t k = 0; k < o.alphas.size(); ++k)
        line += (k ? "," : "") + format_sig(o.alphas[k]);
      e.push_back(line);
    }
  }
  e.push_back("out=" + o.out_dir);
  return e;
}

std::string join_compact(const std::vector<std::string>& echo) {
  std::string s;
  for (const std::string& line : echo) {
    if (!s.empty()) s += ' ';
    s += line;
  }
  return s;
}

std::string out_path(const CliOptions& o, const std::string& file) {
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / file).string();
}

int run_solve(const CliOptions& o) {
  const BuiltCase built = build_case(o);
  const RunSettings s = build_settings(built.cs, o);
  const std::vector<std::string> echo = echo_config("solve", built, s, o);

  const SolveOutput out = solve_case(built.cs, s);
  if (!out.beta_warning.empty()) std::cerr << "warning: " << out.beta_warning << "\n";
  const AssemblyContext ctx{out.mesh, *built.cs.interface, out.decomp, out.spaces};

  ConvergenceRow row;
  row.level = 0;
  row.nx = s.nx;
  row.h = out.mesh.h;
  row.ndof = out.spaces.total;
  row.err = built.cs.exact
                ? error_norms(ctx, built.cs.coeffs, out.problem, out.u, *built.cs.exact)
                : nan_error_report(out.spaces.total, out.mesh.h);
  row.cond = o.with_cond ? estimate_condition(out.system.A).kappa
                         : std::numeric_limits<double>::quiet_NaN();

  const std::string compact = join_compact(echo);
  const std::array<std::pair<int, const char*>, 3> fields = {
      std::pair<int, const char*>{kField1, "u1"}, {kField2, "u2"}, {kFieldGamma, "ugamma"}};
  std::vector<std::string> written;
  for (const auto& [field, tag] : fields) {
    const std::string path = out_path(o, built.cs.name + "_" + tag + ".vtk");
    write_vtk_field(path, ctx, field, out.u, "cutfrac field=" + std::string(tag) + " " + compact);
    written.push_back(path);
  }
  const std::string summary = out_path(o, built.cs.name + "_summary.csv");
  write_summary_csv(summary, row, echo);
  written.push_back(summary);

  std::cout << "wrote";
  for (const std::string& path : written) std::cout << ' ' << path;
  std::cout << "\nh=" << format_sig(row.h) << " ndof=" << row.ndof;
  if (built.cs.exact)
    std::cout << " errL2_bulk=" << format_sig(row.err.errL2_bulk)
              << " energy_err=" << format_sig(row.err.energy_err);
  if (o.with_cond) std::cout << " cond=" << format_sig(row.cond);
  if (out.cg_iterations >= 0) std::cout << " cg_iters=" << out.cg_iterations;
  std::cout << "\n";
  return 0;
}

int run_convergence(const CliOptions& o) {
  const BuiltCase built = build_case(o);
  const RunSettings s = build_settings(built.cs, o);
  const std::vector<std::string> echo = echo_config("convergence", built, s, o);

  const ConvergenceTable table = convergence_study(built.cs, s, {o.nx, o.levels, o.with_cond});
  const std::string path = out_path(o, built.cs.name + "_convergence.csv");
  write_convergence_csv(path, table, echo);
  std::cout << "wrote " << path << "\n";
  if (table.rows.empty()) std::cerr << "warning: empty table\n";
  for (int c = 0; c < kRateColumnCount; ++c)
    if (std::isfinite(table.ls_rate[c]))
      std::cout << "rate " << rate_column_name(c) << " = " << format_sig(table.ls_rate[c])
                << "\n";
  if (!table.failure.empty()) {
    std::cerr << "error: study stopped early: " << table.failure << "\n";
    return 5;
  }
  return 0;
}

int run_condition(const CliOptions& o) {
  const BuiltCase built = build_case(o);
  const RunSettings s = build_settings(built.cs, o);
  const std::vector<std::string> echo = echo_config("condition", built, s, o);

  ConditionTable table;
  std::string file;
  if (o.sweep == "alpha") {
    if (o.case_id != 1)
      throw ConfigError("--sweep alpha varies the coupling strength, which only case 1 permits");
    table = condition_alpha_study(built.cs, s, o.alphas);
    file = built.cs.name + "_condition_alpha.csv";
  } else {
    table = condition_h_study(built.cs, s, {o.nx, o.levels, true});
    file = built.cs.name + "_condition_h.csv";
  }
  const std::string path = out_path(o, file);
  write_condition_csv(path, table, echo);
  std::cout << "wrote " << path << "\n";
  if (o.sweep == "h" && std::isfinite(table.slope))
    std::cout << "slope log(cond) vs log(h) = " << format_sig(table.slope) << "\n";
  if (!table.failure.empty()) {
    std::cerr << "error: study stopped early: " << table.failure << "\n";
    return 4;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cut finite element solver for pressure in fractured porous media"};
  app.require_subcommand(1);
  CliOptions o;
  CLI::App* solve = app.add_subcommand("solve", "run one case, write VTK fields and a summary CSV");
  CLI::App* conv = app.add_subcommand("convergence", "refinement study with fitted rates");
  CLI::App* cond = app.add_subcommand("condition", "condition numbers vs h or vs alpha");
  add_common(solve, o);
  add_common(conv, o);
  add_common(cond, o);
  cond->add_option("--sweep", o.sweep, "h | alpha")->check(CLI::IsMember({"h", "alpha"}));
  cond->add_option("--alphas", o.alphas, "alpha values for --sweep alpha")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = solve->parsed() ? solve : conv->parsed() ? conv : cond;
    if (!o.config_path.empty()) apply_config_file(*active, o.config_path);
    if (solve->parsed()) return run_solve(o);
    if (conv->parsed()) return run_convergence(o);
    return run_condition(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 5;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
