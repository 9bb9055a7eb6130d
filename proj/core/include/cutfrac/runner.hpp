#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutfrac/cases.hpp"
#include "cutfrac/linalg.hpp"
#include "cutfrac/spaces.hpp"

namespace cutfrac {

enum class SolverKind { Direct, Cg };

// Effective per-run parameters. Seed from the case with settings_for, then
// override individual fields.
struct RunSettings {
  Formulation formulation = Formulation::Robust;
  int nx = 11;
  std::optional<double> alpha; // constant coupling override (manufactured case)
  double xi = 1.0;
  double beta = 10.0;
  double gamma = 1.0;
  StabilizationToggles stab;
  bool refined_tau = false;
  std::optional<std::array<double, 2>> beta_dir; // refined mode; derived when absent
  SolverKind solver = SolverKind::Direct;
  double cg_tol = 1e-10;
  bool strict_beta = false;
};

RunSettings settings_for(const CaseSpec& cs);

struct SolveOutput {
  BackgroundMesh mesh;
  ActiveDecomposition decomp;
  SpaceSet spaces;
  AssembledSystem system; // after Dirichlet elimination
  Vector u;               // full-size solution, constrained entries hold their values
  ProblemConfig problem;  // effective assembly configuration
  int cg_iterations = -1;
  std::string beta_warning; // nonempty when the beta condition is violated (non-strict)
};

SolveOutput solve_case(const CaseSpec& cs, const RunSettings& settings);

DirichletSpec boundary_conditions(const CaseSpec& cs, const BackgroundMesh& mesh,
                                  const SpaceSet& spaces);

// ny keeping cells near-square: nx * height/width rounded to the nearest odd.
int derive_ny(int nx, const BBox& bbox);

// nx_{k+1} = 2 nx_k + 1: node lines never repeat, h halves per level.
std::vector<int> level_sequence(int nx0, int levels);

} // namespace cutfrac
