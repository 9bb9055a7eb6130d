#pragma once

#include <array>
#include <string>
#include <vector>

#include "cutfrac/cases.hpp"
#include "cutfrac/runner.hpp"

namespace cutfrac {

struct ErrorReport {
  double errL2_bulk = 0.0;
  double errH1semi_bulk = 0.0;
  double errL2_gamma = 0.0;
  double errH1semi_gamma = 0.0;
  double errH1_bulk = 0.0; // full norms alongside the seminorm columns
  double errH1_gamma = 0.0;
  double energy_err = 0.0;
  // squared energy pieces: A-weighted bulk gradients, h-weighted interface
  // fluxes, A_Gamma-weighted tangential gradient, tau-weighted jumps,
  // stabilization seminorm
  std::array<double, 5> energy_terms{0.0, 0.0, 0.0, 0.0, 0.0};
  int ndof = 0;
  double h = 0.0;
};

ErrorReport error_norms(const AssemblyContext& ctx, const Coefficients& coeffs,
                        const ProblemConfig& config, const Vector& u,
                        const ExactSolution& exact);

// NaN error columns for runs without an exact solution.
ErrorReport nan_error_report(int ndof, double h);

struct ConvergenceRow {
  int level = 0;
  int nx = 0;
  double h = 0.0;
  int ndof = 0;
  ErrorReport err;
  double cond = 0.0;
};

inline constexpr int kRateColumnCount = 6;
const char* rate_column_name(int c); // errL2_bulk ... energy_err, cond
double rate_column_value(const ConvergenceRow& row, int c);

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::array<double, kRateColumnCount> ls_rate{}; // NaN when < 3 usable rows
  std::vector<std::array<double, kRateColumnCount>> pair_rate; // rows.size()-1 entries
  std::string failure; // nonempty when the study stopped early
};

// Least-squares slope of log y vs log x over the points with x, y > 0.
// NaN when fewer than two usable points remain.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void fit_rates(ConvergenceTable& table);

struct StudyParams {
  int nx0 = 11;
  int levels = 4;
  bool with_cond = false;
};

ConvergenceTable convergence_study(const CaseSpec& cs, const RunSettings& settings,
                                   const StudyParams& study);

struct ConditionRow {
  int level = -1;
  int nx = 0;
  double h = 0.0;
  int ndof = 0;
  double alpha = 0.0; // alpha sweeps only
  double cond = 0.0;
};

struct ConditionTable {
  enum class Mode { HSweep, AlphaSweep };
  Mode mode = Mode::HSweep;
  Formulation formulation = Formulation::Robust;
  std::vector<ConditionRow> rows;
  double slope = 0.0; // h sweeps: LS slope of log cond vs log h
  std::string failure;
};

ConditionTable condition_h_study(const CaseSpec& cs, const RunSettings& settings,
                                 const StudyParams& study);
ConditionTable condition_alpha_study(const CaseSpec& cs, const RunSettings& settings,
                                     const std::vector<double>& alphas);

// Total variation of uGamma along the crack (segment midpoints ordered by y,
// then x) minus the variation of its monotone rearrangement; zero for
// oscillation-free profiles.
double crack_total_variation_excess(const AssemblyContext& ctx, const Vector& u);

// max over interface quadrature points of |u1 - u2|.
double max_interface_jump(const AssemblyContext& ctx, const Vector& u);

} // namespace cutfrac
