#include "cutfrac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutfrac/errors.hpp"

namespace cutfrac {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<Vec2> side_polygon(const AssemblyContext& ctx, int field, int elem) {
  if (const CutCell* cc = ctx.decomp.cut(elem))
    return field == kField1 ? cc->poly1 : cc->poly2;
  const auto v = ctx.mesh.triangle_vertices(elem);
  return {v[0], v[1], v[2]};
}

double field_value(const AssemblyContext& ctx, int field, int elem, const P1Basis& basis,
                   const Vector& u) {
  const auto& tri = ctx.mesh.triangles[elem].v;
  double v = 0.0;
  for (int k = 0; k < 3; ++k) v += u[ctx.spaces.dof(field, tri[k])] * basis.value[k];
  return v;
}

Vec2 field_gradient(const AssemblyContext& ctx, int field, int elem, const P1Basis& basis,
                    const Vector& u) {
  const auto& tri = ctx.mesh.triangles[elem].v;
  Vec2 g = Vec2::Zero();
  for (int k = 0; k < 3; ++k) g += u[ctx.spaces.dof(field, tri[k])] * basis.grad[k];
  return g;
}

Mat2 tau_matrix(const RobustPenalty& rp) {
  return rp.tau[0] * coupling_eigprojector(0) + rp.tau[1] * coupling_eigprojector(1);
}

} // namespace

ErrorReport nan_error_report(int ndof, double h) {
  ErrorReport r;
  r.errL2_bulk = r.errH1semi_bulk = r.errL2_gamma = r.errH1semi_gamma = kNan;
  r.errH1_bulk = r.errH1_gamma = r.energy_err = kNan;
  r.energy_terms = {kNan, kNan, kNan, kNan, kNan};
  r.ndof = ndof;
  r.h = h;
  return r;
}

ErrorReport error_norms(const AssemblyContext& ctx, const Coefficients& coeffs,
                        const ProblemConfig& config, const Vector& u,
                        const ExactSolution& exact) {
  const double h = ctx.mesh.h;
  double l2_bulk = 0.0, h1_bulk = 0.0, energy_bulk = 0.0;

  const std::array<const std::vector<int>*, 2> elem_sets = {&ctx.decomp.elems1,
                                                            &ctx.decomp.elems2};
  const std::array<const MatFn*, 2> As = {&coeffs.A1, &coeffs.A2};
  const std::array<const ScalarFn*, 2> exact_u = {&exact.u1, &exact.u2};
  const std::array<const VecFn*, 2> exact_g = {&exact.grad_u1, &exact.grad_u2};

  for (int f = 0; f < 2; ++f) {
    for (int e : *elem_sets[f]) {
      const std::vector<Vec2> poly = side_polygon(ctx, f, e);
      if (poly.size() < 3) continue;
      const QuadratureRule rule = polygon_quadrature(poly);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2& p = rule.points[q];
        const double w = rule.weights[q];
        const P1Basis basis = eval_basis(ctx.mesh, e, p);
        const double ev = field_value(ctx, f, e, basis, u) - (*exact_u[f])(p);
        const Vec2 eg = field_gradient(ctx, f, e, basis, u) - (*exact_g[f])(p);
        l2_bulk += w * ev * ev;
        h1_bulk += w * eg.squaredNorm();
        energy_bulk += w * eg.dot((*As[f])(p) * eg);
      }
    }
  }

  double l2_gamma = 0.0, h1_gamma = 0.0;
  double energy_flux = 0.0, energy_gamma = 0.0, energy_jump = 0.0;

  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const int e = cc.element;
    const Vec2 mid = cc.seg_midpoint();
    const double aG = coeffs.AGamma(mid);
    const InterfaceCoupling ic = coupling_from_alpha_xi(config.coupling.alpha(mid),
                                                        config.coupling.xi);
    const RobustPenalty rp =
        config.penalty.refined ? robust_penalty_refined(ic, h, config.penalty.beta_dir)
                               : robust_penalty(ic, h, config.penalty.beta);
    const Mat2 tauM = tau_matrix(rp);
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& p = rule.points[q];
      const double w = rule.weights[q];
      const P1Basis basis = eval_basis(ctx.mesh, e, p);
      const Vec2 n = ctx.interface.normal(p);

      const double egv = field_value(ctx, kFieldGamma, e, basis, u) - exact.uGamma(p);
      Vec2 egg = field_gradient(ctx, kFieldGamma, e, basis, u) - exact.grad_uGamma(p);
      egg -= n.dot(egg) * n;
      l2_gamma += w * egv * egv;
      h1_gamma += w * egg.squaredNorm();
      energy_gamma += w * aG * egg.squaredNorm();

      Vec2 jump;
      for (int f = 0; f < 2; ++f) {
        const Vec2 eg = field_gradient(ctx, f, e, basis, u) - (*exact_g[f])(p);
        energy_flux += w * h * eg.dot((*As[f])(p) * eg);
        const double ev = field_value(ctx, f, e, basis, u) - (*exact_u[f])(p);
        jump[f] = ev - egv;
      }
      energy_jump += w * jump.dot(tauM * jump);
    }
  }

  // Smooth exact fields carry no face jumps, so the stabilization seminorm of
  // the error is that of the discrete solution itself.
  const SpMat S = assemble_ghost_penalty(ctx, coeffs, config.gamma, config.stab).compressed();
  const double energy_stab = u.dot(S * u);

  ErrorReport r;
  r.errL2_bulk = std::sqrt(l2_bulk);
  r.errH1semi_bulk = std::sqrt(h1_bulk);
  r.errL2_gamma = std::sqrt(l2_gamma);
  r.errH1semi_gamma = std::sqrt(h1_gamma);
  r.errH1_bulk = std::sqrt(l2_bulk + h1_bulk);
  r.errH1_gamma = std::sqrt(l2_gamma + h1_gamma);
  r.energy_terms = {energy_bulk, energy_flux, energy_gamma, energy_jump, energy_stab};
  r.energy_err = std::sqrt(energy_bulk + energy_flux + energy_gamma + energy_jump + energy_stab);
  r.ndof = ctx.spaces.total;
  r.h = h;
  return r;
}

const char* rate_column_name(int c) {
  static const char* names[kRateColumnCount] = {"errL2_bulk",     "errH1semi_bulk",
                                                "errL2_gamma",    "errH1semi_gamma",
                                                "energy_err",     "cond"};
  return names[c];
}

double rate_column_value(const ConvergenceRow& row, int c) {
  switch (c) {
    case 0: return row.err.errL2_bulk;
    case 1: return row.err.errH1semi_bulk;
    case 2: return row.err.errL2_gamma;
    case 3: return row.err.errH1semi_gamma;
    case 4: return row.err.energy_err;
    default: return row.cond;
  }
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return kNan;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return den > 0.0 ? num / den : kNan;
}

void fit_rates(ConvergenceTable& table) {
  table.pair_rate.assign(table.rows.empty() ? 0 : table.rows.size() - 1, {});
  for (int c = 0; c < kRateColumnCount; ++c) {
    std::vector<double> hs, vs;
    for (const ConvergenceRow& row : table.rows) {
      hs.push_back(row.h);
      vs.push_back(rate_column_value(row, c));
    }
    table.ls_rate[c] = table.rows.size() >= 3 ? fit_loglog_slope(hs, vs) : kNan;
    for (size_t k = 0; k + 1 < table.rows.size(); ++k) {
      const double v0 = vs[k], v1 = vs[k + 1];
      const double ratio = v0 / v1, hr = hs[k] / hs[k + 1];
      table.pair_rate[k][c] =
          (v0 > 0.0 && v1 > 0.0 && hr > 0.0) ? std::log(ratio) / std::log(hr) : kNan;
    }
  }
}

ConvergenceTable convergence_study(const CaseSpec& cs, const RunSettings& settings,
                                   const StudyParams& study) {
  ConvergenceTable table;
  RunSettings s = settings;
  const std::vector<int> seq = level_sequence(study.nx0, study.levels);
  for (int level = 0; level < study.levels; ++level) {
    s.nx = seq[level];
    try {
      const SolveOutput out = solve_case(cs, s);
      const AssemblyContext ctx{out.mesh, *cs.interface, out.decomp, out.spaces};
      ConvergenceRow row;
      row.level = level;
      row.nx = s.nx;
      row.h = out.mesh.h;
      row.ndof = out.spaces.total;
      row.err = cs.exact ? error_norms(ctx, cs.coeffs, out.problem, out.u, *cs.exact)
                         : nan_error_report(out.spaces.total, out.mesh.h);
      row.cond = study.with_cond ? estimate_condition(out.system.A).kappa : kNan;
      table.rows.push_back(std::move(row));
    } catch (const SolverError& e) {
      table.failure = e.what();
      break;
    } catch (const ConvergenceError& e) {
      table.failure = e.what();
      break;
    }
  }
  fit_rates(table);
  return table;
}

ConditionTable condition_h_study(const CaseSpec& cs, const RunSettings& settings,
                                 const StudyParams& study) {
  ConditionTable table;
  table.mode = ConditionTable::Mode::HSweep;
  table.formulation = settings.formulation;
  table.slope = kNan;
  RunSettings s = settings;
  const std::vector<int> seq = level_sequence(study.nx0, study.levels);
  for (int level = 0; level < study.levels; ++level) {
    s.nx = seq[level];
    try {
      const SolveOutput out = solve_case(cs, s);
      const ConditionEstimate est = estimate_condition(out.system.A);
      table.rows.push_back({level, s.nx, out.mesh.h, out.spaces.total, kNan, est.kappa});
    } catch (const SolverError& e) {
      table.failure = e.what();
      break;
    } catch (const ConvergenceError& e) {
      table.failure = e.what();
      break;
    }
  }
  std::vector<double> hs, ks;
  for (const ConditionRow& row : table.rows) {
    hs.push_back(row.h);
    ks.push_back(row.cond);
  }
  if (table.rows.size() >= 3) table.slope = fit_loglog_slope(hs, ks);
  return table;
}

ConditionTable condition_alpha_study(const CaseSpec& cs, const RunSettings& settings,
                                     const std::vector<double>& alphas) {
  ConditionTable table;
  table.mode = ConditionTable::Mode::AlphaSweep;
  table.formulation = settings.formulation;
  table.slope = kNan;
  RunSettings s = settings;
  for (double a : alphas) {
    s.alpha = a;
    try {
      const SolveOutput out = solve_case(cs, s);
      const ConditionEstimate est = estimate_condition(out.system.A);
      table.rows.push_back({-1, s.nx, out.mesh.h, out.spaces.total, a, est.kappa});
    } catch (const SolverError& e) {
      table.failure = e.what();
      break;
    } catch (const ConvergenceError& e) {
      table.failure = e.what();
      break;
    }
  }
  return table;
}

double crack_total_variation_excess(const AssemblyContext& ctx, const Vector& u) {
  std::vector<std::pair<Vec2, double>> samples;
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const Vec2 mid = cc.seg_midpoint();
    const P1Basis basis = eval_basis(ctx.mesh, cc.element, mid);
    samples.emplace_back(mid, field_value(ctx, kFieldGamma, cc.element, basis, u));
  }
  if (samples.size() < 2) return 0.0;
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    if (a.first.y() != b.first.y()) return a.first.y() < b.first.y();
    return a.first.x() < b.first.x();
  });
  double tv = 0.0, lo = samples[0].second, hi = samples[0].second;
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    tv += std::abs(samples[k + 1].second - samples[k].second);
    lo = std::min(lo, samples[k + 1].second);
    hi = std::max(hi, samples[k + 1].second);
  }
  return tv - (hi - lo);
}

double max_interface_jump(const AssemblyContext& ctx, const Vector& u) {
  double jmax = 0.0;
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    for (const Vec2& p : rule.points) {
      const P1Basis basis = eval_basis(ctx.mesh, cc.element, p);
      const double u1 = field_value(ctx, kField1, cc.element, basis, u);
      const double u2 = field_value(ctx, kField2, cc.element, basis, u);
      jmax = std::max(jmax, std::abs(u1 - u2));
    }
  }
  return jmax;
}

} // namespace cutfrac
