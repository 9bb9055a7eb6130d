#include "cutfrac/runner.hpp"

#include <cmath>
#include <sstream>

#include "cutfrac/errors.hpp"

namespace cutfrac {

RunSettings settings_for(const CaseSpec& cs) {
  RunSettings s;
  s.xi = cs.xi;
  s.beta = cs.beta;
  s.gamma = cs.gamma;
  s.stab = cs.stab;
  return s;
}

int derive_ny(int nx, const BBox& bbox) {
  const double t = nx * bbox.height() / bbox.width();
  int k = static_cast<int>(std::lround(t));
  if (k % 2 == 0) k = std::abs(t - (k - 1)) <= std::abs(t - (k + 1)) ? k - 1 : k + 1;
  return std::max(k, 1);
}

std::vector<int> level_sequence(int nx0, int levels) {
  if (nx0 < 1 || levels < 1) throw ConfigError("need nx0 >= 1 and levels >= 1");
  std::vector<int> seq(levels);
  seq[0] = nx0;
  for (int k = 1; k < levels; ++k) seq[k] = 2 * seq[k - 1] + 1;
  return seq;
}

DirichletSpec boundary_conditions(const CaseSpec& cs, const BackgroundMesh& mesh,
                                  const SpaceSet& spaces) {
  DirichletSpec spec;
  const double tol = 1e-9 * std::max(mesh.bbox.width(), mesh.bbox.height());
  for (int n = 0; n < static_cast<int>(mesh.nodes.size()); ++n) {
    const Vec2& p = mesh.nodes[n];
    if (!mesh.on_boundary(p, tol)) continue;
    for (const BoundaryPatch& patch : cs.dirichlet) {
      if (!patch.on(p)) continue;
      for (int f = 0; f < 3; ++f)
        if (patch.fields[f] && spaces.dof(f, n) >= 0)
          spec.entries.push_back({f, n, patch.value(p)});
    }
  }
  return spec;
}

SolveOutput solve_case(const CaseSpec& cs, const RunSettings& settings) {
  SolveOutput out;
  out.mesh = build_background_mesh(settings.nx, derive_ny(settings.nx, cs.bbox), cs.bbox);
  out.decomp = build_active_meshes(out.mesh, *cs.interface);
  out.spaces = build_spaces(out.decomp, out.mesh);
  const AssemblyContext ctx{out.mesh, *cs.interface, out.decomp, out.spaces};

  ProblemConfig pc;
  pc.formulation = settings.formulation;
  if (settings.alpha) {
    const double a = *settings.alpha;
    pc.coupling.alpha = [a](const Vec2&) { return a; };
  } else {
    pc.coupling.alpha = cs.alpha;
  }
  pc.coupling.xi = settings.xi;
  pc.penalty.beta = settings.beta;
  pc.penalty.refined = settings.refined_tau;
  if (settings.refined_tau) {
    if (settings.beta_dir) {
      pc.penalty.beta_dir = *settings.beta_dir;
    } else {
      double s1 = 0.0, s2 = 0.0;
      for (const auto& [p, n] : interface_normal_samples(ctx)) {
        s1 = std::max(s1, n.dot(cs.coeffs.A1(p) * n));
        s2 = std::max(s2, n.dot(cs.coeffs.A2(p) * n));
      }
      pc.penalty.beta_dir = refined_beta_defaults(s1, s2);
    }
  }
  pc.gamma = settings.gamma;
  pc.stab = settings.stab;
  pc.strict_beta = settings.strict_beta;
  out.problem = pc;

  if (settings.formulation == Formulation::Robust && !settings.strict_beta) {
    const BetaCheck check = check_beta_condition(cs.coeffs.A1, cs.coeffs.A2,
                                                 interface_normal_samples(ctx), settings.beta);
    if (!check.ok) {
      std::ostringstream msg;
      msg << "beta = " << settings.beta << " is below the coercivity requirement "
          << check.norm_sq << "; the factorization may fail";
      out.beta_warning = msg.str();
    }
  }

  out.system = assemble_system(ctx, cs.coeffs, pc, boundary_conditions(cs, out.mesh, out.spaces));
  try {
    if (settings.solver == SolverKind::Direct) {
      out.u = solve_direct(out.system.A, out.system.rhs);
    } else {
      CgResult r = solve_cg(out.system.A, out.system.rhs, settings.cg_tol, 10 * out.system.size(),
                            Preconditioner::Diagonal);
      out.u = std::move(r.x);
      out.cg_iterations = r.iterations;
    }
  } catch (const SolverError& e) {
    if (out.beta_warning.empty()) throw;
    throw SolverError(std::string(e.what()) + "; " + out.beta_warning);
  }
  return out;
}

} // namespace cutfrac
