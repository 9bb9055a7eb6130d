#include <doctest.h>

#include <cmath>
#include <random>

#include <cutfrac/assembly.hpp>
#include <cutfrac/cases.hpp>
#include <cutfrac/errors.hpp>
#include <cutfrac/runner.hpp>

using namespace cutfrac;

namespace {

struct Setup {
  CaseSpec cs;
  BackgroundMesh mesh;
  ActiveDecomposition decomp;
  SpaceSet spaces;

  explicit Setup(int nx) : cs(case_manufactured()) {
    mesh = build_background_mesh(nx, nx, cs.bbox);
    decomp = build_active_meshes(mesh, *cs.interface);
    spaces = build_spaces(decomp, mesh);
  }
  AssemblyContext ctx() const { return {mesh, *cs.interface, decomp, spaces}; }
};

ProblemConfig config_for(const Setup& s, Formulation form, double alpha, double xi) {
  ProblemConfig cfg;
  cfg.formulation = form;
  cfg.coupling.alpha = [alpha](const Vec2&) { return alpha; };
  cfg.coupling.xi = xi;
  cfg.penalty.beta = 10.0;
  cfg.gamma = 1.0;
  cfg.stab = s.cs.stab;
  return cfg;
}

double max_abs_entry(const SpMat& A) {
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double block_sum(const Vector& v, const SpaceSet& s, int field) {
  double acc = 0.0;
  for (int i = 0; i < s.count[field]; ++i) acc += v[s.offset[field] + i];
  return acc;
}

} // namespace

TEST_CASE("assembly: system matrices are exactly symmetric") {
  const Setup s(11);
  for (auto form : {Formulation::Standard, Formulation::Robust}) {
    const AssembledSystem sys =
        assemble_unconstrained(s.ctx(), s.cs.coeffs, config_for(s, form, 1.0, 0.75));
    const SpMat diff = sys.A - SpMat(sys.A.transpose());
    CHECK(diff.norm() == 0.0);
  }
}

TEST_CASE("assembly: the global constant lies in the unconstrained kernel") {
  const Setup s(11);
  for (auto form : {Formulation::Standard, Formulation::Robust}) {
    const AssembledSystem sys =
        assemble_unconstrained(s.ctx(), s.cs.coeffs, config_for(s, form, 10.0, 0.6));
    const Vector r = sys.A * Vector::Ones(sys.size());
    CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-10 * max_abs_entry(sys.A));
  }
}

TEST_CASE("assembly: constrained systems factor as SPD") {
  const Setup s(11);
  for (auto form : {Formulation::Standard, Formulation::Robust}) {
    const DirichletSpec bc = boundary_conditions(s.cs, s.mesh, s.spaces);
    const AssembledSystem sys =
        assemble_system(s.ctx(), s.cs.coeffs, config_for(s, form, 1.0, 1.0), bc);
    CHECK_NOTHROW(DirectSolver{sys.A});
    CHECK(sys.meta.block_count[0] > 0);
    CHECK(sys.meta.block_count[2] > 0);
    CHECK(sys.meta.h == doctest::Approx(s.mesh.h));
  }
}

TEST_CASE("assembly: ghost penalty is PSD with constants in its kernel") {
  const Setup s(11);
  StabilizationToggles all{true, true, true};
  const SparseSymmetric S = assemble_ghost_penalty(s.ctx(), s.cs.coeffs, 1.0, all);
  const SpMat M = S.compressed();
  const double scale = max_abs_entry(M);
  CHECK(scale > 0.0);

  const Vector r = M * Vector::Ones(M.rows());
  CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-12 * scale);

  std::mt19937 rng(42u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(M.rows());
    for (int i = 0; i < x.size(); ++i) x[i] = gauss(rng);
    CHECK(x.dot(M * x) >= -1e-12 * scale * x.squaredNorm());
  }
}

TEST_CASE("assembly: linear fields only pass the jump terms of the stabilization") {
  const Setup s(11);
  Vector lin = Vector::Zero(s.spaces.total);
  for (int f = 0; f < 3; ++f)
    for (int n = 0; n < static_cast<int>(s.mesh.nodes.size()); ++n) {
      const int dof = s.spaces.dof(f, n);
      if (dof >= 0) lin[dof] = 0.3 * s.mesh.nodes[n].x() + 0.7 * s.mesh.nodes[n].y() - 0.2;
    }

  StabilizationToggles jumps_only{true, true, false};
  const SpMat Sj = assemble_ghost_penalty(s.ctx(), s.cs.coeffs, 1.0, jumps_only).compressed();
  CHECK((Sj * lin).lpNorm<Eigen::Infinity>() <= 1e-12 * max_abs_entry(Sj));

  // the band normal term penalizes the nonzero normal gradient of the same field
  StabilizationToggles with_normal{true, true, true};
  const SpMat Sn = assemble_ghost_penalty(s.ctx(), s.cs.coeffs, 1.0, with_normal).compressed();
  CHECK((Sn * lin).lpNorm<Eigen::Infinity>() > 1e-10);
}

TEST_CASE("assembly: gamma scales the stabilization linearly") {
  const Setup s(11);
  StabilizationToggles all{true, true, true};
  const SpMat S1 = assemble_ghost_penalty(s.ctx(), s.cs.coeffs, 1.0, all).compressed();
  const SpMat S2 = assemble_ghost_penalty(s.ctx(), s.cs.coeffs, 0.01, all).compressed();
  CHECK((0.01 * S1 - S2).norm() <= 1e-14 * S1.norm());
  const SpMat S0 = assemble_ghost_penalty(s.ctx(), s.cs.coeffs, 0.0, all).compressed();
  CHECK(S0.norm() == 0.0);
}

TEST_CASE("assembly: robust coupling tends to the Robin form as beta grows") {
  const Setup s(11);
  CouplingField coupling;
  coupling.alpha = [](const Vec2&) { return 1.0; };
  coupling.xi = 0.75;
  const SpMat standard = assemble_standard_coupling(s.ctx(), coupling).compressed();
  PenaltyParams penalty;
  penalty.beta = 1e14;
  const SpMat robust =
      assemble_robust_coupling(s.ctx(), coupling, penalty, s.cs.coeffs).compressed();
  CHECK((robust - standard).norm() <= 1e-9 * standard.norm());
}

TEST_CASE("assembly: load vector sums to the integrated sources") {
  const Setup s(11);
  const Vector rhs = assemble_load(s.ctx(), s.cs.coeffs);
  // sum over one field's dofs collapses the basis to 1 on its subdomain
  CHECK(block_sum(rhs, s.spaces, kField1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(block_sum(rhs, s.spaces, kField2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(block_sum(rhs, s.spaces, kFieldGamma) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("assembly: crack thickness scales the interface source") {
  const Setup s(11);
  Coefficients c = s.cs.coeffs;
  c.fGamma = [](const Vec2&) { return 1.0; };
  const double plain = block_sum(assemble_load(s.ctx(), c), s.spaces, kFieldGamma);
  CHECK(plain == doctest::Approx(1.0).epsilon(1e-12));
  c.d = 0.25;
  const double scaled = block_sum(assemble_load(s.ctx(), c), s.spaces, kFieldGamma);
  CHECK(scaled == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("assembly: interface normal samples for a vertical crack") {
  const Setup s(11);
  const auto samples = interface_normal_samples(s.ctx());
  CHECK(samples.size() == 3 * s.decomp.elemsG.size());
  for (const auto& [p, n] : samples) {
    CHECK(p.x() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(n.x() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.y() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("assembly: beta condition enforcement") {
  const Setup s(11);
  ProblemConfig cfg = config_for(s, Formulation::Robust, 1.0, 1.0);
  cfg.penalty.beta = 1.0; // below the required n.A1 n + n.A2 n = 2
  cfg.strict_beta = true;
  const DirichletSpec bc = boundary_conditions(s.cs, s.mesh, s.spaces);
  CHECK_THROWS_AS(assemble_system(s.ctx(), s.cs.coeffs, cfg, bc), ConfigError);
  cfg.strict_beta = false;
  CHECK_NOTHROW(assemble_system(s.ctx(), s.cs.coeffs, cfg, bc));
  cfg.penalty.beta = 2.0; // boundary value passes
  cfg.strict_beta = true;
  CHECK_NOTHROW(assemble_system(s.ctx(), s.cs.coeffs, cfg, bc));
}

TEST_CASE("assembly: grid-line crack with degenerate cuts assembles cleanly") {
  CaseSpec cs = case_manufactured();
  const BackgroundMesh mesh = build_background_mesh(2, 2, cs.bbox);
  const ActiveDecomposition decomp = build_active_meshes(mesh, *cs.interface);
  const SpaceSet spaces = build_spaces(decomp, mesh);
  const AssemblyContext ctx{mesh, *cs.interface, decomp, spaces};
  ProblemConfig cfg;
  cfg.coupling.alpha = [](const Vec2&) { return 1.0; };
  const AssembledSystem sys = assemble_unconstrained(ctx, cs.coeffs, cfg);
  CHECK(sys.A.coeffs().allFinite());
  CHECK((sys.A - SpMat(sys.A.transpose())).norm() == 0.0);
  const Vector r = sys.A * Vector::Ones(sys.size());
  CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-10 * max_abs_entry(sys.A));
}
