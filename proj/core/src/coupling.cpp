#include "cutfrac/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "cutfrac/errors.hpp"

namespace cutfrac {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

Vec2 coupling_eigvec(int i) {
  return i == 0 ? Vec2(kInvSqrt2, kInvSqrt2) : Vec2(kInvSqrt2, -kInvSqrt2);
}

Mat2 coupling_eigprojector(int i) {
  const Vec2 e = coupling_eigvec(i);
  return e * e.transpose();
}

InterfaceCoupling coupling_from_alpha_xi(double alpha, double xi) {
  if (alpha <= 0.0) throw ConfigError("coupling: alpha must be positive");
  if (xi <= 0.5)
    throw ConfigError("coupling: xi must exceed 1/2 (B is singular at 1/2, indefinite below)");
  InterfaceCoupling c;
  c.alpha = alpha;
  c.xi = xi;
  const double s = alpha / (2.0 * xi - 1.0);
  c.B << s * xi, s * (1.0 - xi), s * (1.0 - xi), s * xi;
  c.lambda = {s, alpha};
  return c;
}

namespace {

RobustPenalty penalty_from_betas(const InterfaceCoupling& coupling, double h,
                                 const std::array<double, 2>& betas) {
  RobustPenalty p;
  p.h = h;
  p.beta_dir = betas;
  for (int i = 0; i < 2; ++i) {
    const double lam = coupling.lambda[i];
    const double b = betas[i];
    // forms chosen to stay finite for lam up to ~1e300
    p.tau[i] = b / (h + b / lam);
    p.c_ff[i] = -h / (lam * h + b);
    p.c_fj[i] = -1.0 / (1.0 + b / (lam * h));
    p.c_jj[i] = p.tau[i];
  }
  return p;
}

} // namespace

Mat2 RobustPenalty::Mff() const {
  return c_ff[0] * coupling_eigprojector(0) + c_ff[1] * coupling_eigprojector(1);
}
Mat2 RobustPenalty::Mfj() const {
  return c_fj[0] * coupling_eigprojector(0) + c_fj[1] * coupling_eigprojector(1);
}
Mat2 RobustPenalty::Mjj() const {
  return c_jj[0] * coupling_eigprojector(0) + c_jj[1] * coupling_eigprojector(1);
}

RobustPenalty robust_penalty(const InterfaceCoupling& coupling, double h, double beta) {
  if (h <= 0.0) throw ConfigError("robust_penalty: h must be positive");
  if (beta <= 0.0) throw ConfigError("robust_penalty: beta must be positive");
  RobustPenalty p = penalty_from_betas(coupling, h, {beta, beta});
  p.beta = beta;
  p.refined = false;
  return p;
}

RobustPenalty robust_penalty_refined(const InterfaceCoupling& coupling, double h,
                                     const std::array<double, 2>& beta_dir) {
  if (h <= 0.0) throw ConfigError("robust_penalty: h must be positive");
  if (beta_dir[0] <= 0.0 || beta_dir[1] <= 0.0)
    throw ConfigError("robust_penalty: refined betas must be positive");
  RobustPenalty p = penalty_from_betas(coupling, h, beta_dir);
  p.beta = std::max(beta_dir[0], beta_dir[1]);
  p.refined = true;
  return p;
}

std::array<double, 2> refined_beta_defaults(double norm_sq_1, double norm_sq_2) {
  std::array<double, 2> betas;
  for (int i = 0; i < 2; ++i) {
    const Vec2 e = coupling_eigvec(i);
    betas[i] = 5.0 * (norm_sq_1 * e[0] * e[0] + norm_sq_2 * e[1] * e[1]);
  }
  return betas;
}

BetaCheck check_beta_condition(const MatFn& A1, const MatFn& A2,
                               const std::vector<std::pair<Vec2, Vec2>>& point_normal_samples,
                               double beta) {
  double s1 = 0.0, s2 = 0.0;
  for (const auto& [x, n] : point_normal_samples) {
    s1 = std::max(s1, n.dot(A1(x) * n));
    s2 = std::max(s2, n.dot(A2(x) * n));
  }
  BetaCheck c;
  c.norm_sq = s1 + s2;
  c.ok = beta >= c.norm_sq;
  return c;
}

TauBoundValues tau_bound_values(const InterfaceCoupling& coupling, double h, double beta) {
  const RobustPenalty p = robust_penalty(coupling, h, beta);
  TauBoundValues v;
  for (int i = 0; i < 2; ++i) {
    v.ff = std::max(v.ff, -p.c_ff[i]);
    v.fj = std::max(v.fj, -p.c_fj[i] / std::sqrt(p.tau[i]));
    v.jj = std::max(v.jj, p.tau[i]);
  }
  v.ff_bound = h / beta;
  v.fj_bound = std::sqrt(h / beta);
  v.jj_bound = beta / h;
  return v;
}

} // namespace cutfrac
