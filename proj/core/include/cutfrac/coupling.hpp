#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cutfrac/types.hpp"

namespace cutfrac {

// Robin coupling matrix B built from (alpha, xi). Its eigenvectors are fixed:
// e1 = (1,1)/sqrt(2) with lambda1 = alpha/(2 xi - 1), e2 = (1,-1)/sqrt(2)
// with lambda2 = alpha.
struct InterfaceCoupling {
  double alpha = 1.0;
  double xi = 1.0;
  Mat2 B;
  std::array<double, 2> lambda{1.0, 1.0};
};

Vec2 coupling_eigvec(int i);
Mat2 coupling_eigprojector(int i); // e_i e_i^T

InterfaceCoupling coupling_from_alpha_xi(double alpha, double xi);

// Per-eigen-direction penalty weights tau_i = lambda_i beta / (lambda_i h + beta)
// and the closed-form coefficients of the robust interface form. B^{-1} is
// never formed, so arbitrarily large lambda_i stay finite.
struct RobustPenalty {
  double h = 0.0;
  double beta = 0.0;
  std::array<double, 2> beta_dir{0.0, 0.0}; // per-direction beta (refined mode)
  bool refined = false;
  std::array<double, 2> tau{0.0, 0.0};
  std::array<double, 2> c_ff{0.0, 0.0}; // eigenvalues of B^{-1} tau B^{-1} - B^{-1}
  std::array<double, 2> c_fj{0.0, 0.0}; // eigenvalues of B^{-1} tau - I
  std::array<double, 2> c_jj{0.0, 0.0}; // eigenvalues of tau

  Mat2 Mff() const;
  Mat2 Mfj() const;
  Mat2 Mjj() const;
};

RobustPenalty robust_penalty(const InterfaceCoupling& coupling, double h, double beta);
RobustPenalty robust_penalty_refined(const InterfaceCoupling& coupling, double h,
                                     const std::array<double, 2>& beta_dir);

// Default per-direction betas for the refined mode, from the directional
// version of the beta condition: beta_i = 5 * sum_j s_j |e_ij|^2 where
// s_j = sup |A_j^{1/2} n|^2 (same safety margin as beta = 10 against
// norm_sq = 2 in the identity-coefficient examples).
std::array<double, 2> refined_beta_defaults(double norm_sq_1, double norm_sq_2);

struct BetaCheck {
  bool ok = true;
  double norm_sq = 0.0; // sum_i sup over samples of n . A_i n; required minimum for beta
};

BetaCheck check_beta_condition(const MatFn& A1, const MatFn& A2,
                               const std::vector<std::pair<Vec2, Vec2>>& point_normal_samples,
                               double beta);

// Spectral norms of (B^{-1} tau B^{-1} - B^{-1}), (B^{-1} tau - I) tau^{-1/2},
// and tau, with the bounds h/beta, sqrt(h/beta), beta/h they must satisfy.
struct TauBoundValues {
  double ff = 0.0, fj = 0.0, jj = 0.0;
  double ff_bound = 0.0, fj_bound = 0.0, jj_bound = 0.0;
};

TauBoundValues tau_bound_values(const InterfaceCoupling& coupling, double h, double beta);

} // namespace cutfrac
