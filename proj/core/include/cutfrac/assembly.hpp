#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cutfrac/coupling.hpp"
#include "cutfrac/linalg.hpp"
#include "cutfrac/spaces.hpp"
#include "cutfrac/system.hpp"

namespace cutfrac {

struct Coefficients {
  MatFn A1, A2;             // bulk diffusion fields, SPD pointwise
  ScalarFn AGamma;          // tangential transmissivity along the crack
  std::optional<double> d;  // crack thickness; engages thickness mode
  ScalarFn f1, f2, fGamma;
};

struct StabilizationToggles {
  bool bulk_jumps = true;
  bool band_jumps = false;
  bool band_normal = true;
};

// alpha evaluated at segment midpoints (piecewise crack permeability keeps
// the coupling constant per segment); xi fixed per run.
struct CouplingField {
  ScalarFn alpha;
  double xi = 1.0;
};

struct PenaltyParams {
  double beta = 10.0;
  bool refined = false;
  std::array<double, 2> beta_dir{0.0, 0.0};
};

struct AssemblyContext {
  const BackgroundMesh& mesh;
  const Interface& interface;
  const ActiveDecomposition& decomp;
  const SpaceSet& spaces;
};

SparseSymmetric assemble_bulk_stiffness(const AssemblyContext& ctx, const Coefficients& coeffs);
SparseSymmetric assemble_interface_stiffness(const AssemblyContext& ctx,
                                             const Coefficients& coeffs);
SparseSymmetric assemble_standard_coupling(const AssemblyContext& ctx,
                                           const CouplingField& coupling);
SparseSymmetric assemble_robust_coupling(const AssemblyContext& ctx, const CouplingField& coupling,
                                         const PenaltyParams& penalty, const Coefficients& coeffs);
SparseSymmetric assemble_ghost_penalty(const AssemblyContext& ctx, const Coefficients& coeffs,
                                       double gamma, const StabilizationToggles& toggles);
Vector assemble_load(const AssemblyContext& ctx, const Coefficients& coeffs);

struct ProblemConfig {
  Formulation formulation = Formulation::Robust;
  CouplingField coupling;
  PenaltyParams penalty;
  double gamma = 1.0;
  StabilizationToggles stab;
  bool strict_beta = false; // beta-condition violation becomes an error
};

AssembledSystem assemble_unconstrained(const AssemblyContext& ctx, const Coefficients& coeffs,
                                       const ProblemConfig& config);
AssembledSystem assemble_system(const AssemblyContext& ctx, const Coefficients& coeffs,
                                const ProblemConfig& config, const DirichletSpec& dirichlet);

// Interface quadrature points with analytic normals; input to the beta check.
std::vector<std::pair<Vec2, Vec2>> interface_normal_samples(const AssemblyContext& ctx);

} // namespace cutfrac
