#include <doctest.h>

#include <cmath>
#include <random>

#include <cutfrac/coupling.hpp>
#include <cutfrac/errors.hpp>

using namespace cutfrac;

TEST_CASE("coupling: B from alpha and xi") {
  const InterfaceCoupling c = coupling_from_alpha_xi(1.0, 0.75);
  CHECK(c.B(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(c.B(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.B(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.B(1, 1) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(c.lambda[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(c.lambda[1] == doctest::Approx(1.0).epsilon(1e-14));

  // xi = 1 gives the one-sided Robin matrix alpha * I
  const InterfaceCoupling r = coupling_from_alpha_xi(3.0, 1.0);
  CHECK(r.B(0, 0) == doctest::Approx(3.0));
  CHECK(r.B(0, 1) == doctest::Approx(0.0));
  CHECK(r.lambda[0] == doctest::Approx(3.0));
  CHECK(r.lambda[1] == doctest::Approx(3.0));
}

TEST_CASE("coupling: inadmissible alpha or xi is rejected") {
  CHECK_THROWS_AS(coupling_from_alpha_xi(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(coupling_from_alpha_xi(-1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(coupling_from_alpha_xi(1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(coupling_from_alpha_xi(1.0, 0.3), ConfigError);
}

TEST_CASE("coupling: eigenvector basis of B") {
  const Vec2 e1 = coupling_eigvec(0);
  const Vec2 e2 = coupling_eigvec(1);
  CHECK(e1.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e2.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(e1.dot(e2)) <= 1e-15);
  const InterfaceCoupling c = coupling_from_alpha_xi(2.5, 0.8);
  CHECK((c.B * e1 - c.lambda[0] * e1).norm() <= 1e-12 * c.lambda[0]);
  CHECK((c.B * e2 - c.lambda[1] * e2).norm() <= 1e-12 * c.lambda[1]);
  const Mat2 resolved = c.lambda[0] * coupling_eigprojector(0) + c.lambda[1] * coupling_eigprojector(1);
  CHECK((resolved - c.B).norm() <= 1e-12 * c.B.norm());
}

TEST_CASE("coupling: penalty weight closed form") {
  const InterfaceCoupling c = coupling_from_alpha_xi(1.0, 1.0); // lambda = (1, 1)
  const RobustPenalty rp = robust_penalty(c, 0.1, 10.0);
  CHECK(rp.tau[0] == doctest::Approx(10.0 / 10.1).epsilon(1e-14));
  CHECK(rp.tau[1] == doctest::Approx(10.0 / 10.1).epsilon(1e-14));
}

TEST_CASE("coupling: closed-form coefficients match explicit matrix algebra") {
  std::mt19937 rng(777u);
  std::uniform_real_distribution<double> logalpha(-3.0, 3.0);
  std::uniform_real_distribution<double> xi_dist(0.51, 10.0);
  std::uniform_real_distribution<double> logh(-3.0, 0.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = std::pow(10.0, logalpha(rng));
    const double xi = xi_dist(rng);
    const double h = std::pow(10.0, logh(rng));
    const double beta = 10.0;
    const InterfaceCoupling c = coupling_from_alpha_xi(alpha, xi);
    const RobustPenalty rp = robust_penalty(c, h, beta);

    const Mat2 Binv = c.B.inverse();
    const Mat2 tau =
        rp.tau[0] * coupling_eigprojector(0) + rp.tau[1] * coupling_eigprojector(1);
    const Mat2 ff = Binv * tau * Binv - Binv;
    const Mat2 fj = Binv * tau - Mat2::Identity();
    CHECK((rp.Mff() - ff).norm() <= 1e-10 * std::max(1.0, ff.norm()));
    CHECK((rp.Mfj() - fj).norm() <= 1e-10 * std::max(1.0, fj.norm()));
    CHECK((rp.Mjj() - tau).norm() <= 1e-10 * tau.norm());

    // coefficient ranges
    for (int i = 0; i < 2; ++i) {
      CHECK(rp.tau[i] > 0.0);
      CHECK(rp.tau[i] < std::min(c.lambda[i], beta / h) * (1.0 + 1e-14));
      CHECK(rp.c_fj[i] > -1.0);
      CHECK(rp.c_fj[i] < 0.0);
      CHECK(rp.c_ff[i] > -h / beta);
      CHECK(rp.c_ff[i] < 0.0);
    }
  }
}

TEST_CASE("coupling: spectral bounds of the penalty blocks") {
  const InterfaceCoupling c = coupling_from_alpha_xi(4.0, 0.6);
  const double h = 0.05, beta = 10.0;
  const TauBoundValues tb = tau_bound_values(c, h, beta);
  CHECK(tb.ff_bound == doctest::Approx(h / beta).epsilon(1e-14));
  CHECK(tb.fj_bound == doctest::Approx(std::sqrt(h / beta)).epsilon(1e-14));
  CHECK(tb.jj_bound == doctest::Approx(beta / h).epsilon(1e-14));
  CHECK(tb.ff <= tb.ff_bound * (1.0 + 1e-12));
  CHECK(tb.fj <= tb.fj_bound * (1.0 + 1e-12));
  CHECK(tb.jj <= tb.jj_bound * (1.0 + 1e-12));
}

TEST_CASE("coupling: huge eigenvalues stay finite and reach the Nitsche limit") {
  const InterfaceCoupling c = coupling_from_alpha_xi(1e300, 1.0);
  const double h = 0.1, beta = 10.0;
  const RobustPenalty rp = robust_penalty(c, h, beta);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::isfinite(rp.tau[i]));
    CHECK(std::isfinite(rp.c_ff[i]));
    CHECK(std::isfinite(rp.c_fj[i]));
    CHECK(rp.tau[i] == doctest::Approx(beta / h).epsilon(1e-12));
    CHECK(rp.c_fj[i] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(rp.c_ff[i]) <= 1e-200);
  }
}

TEST_CASE("coupling: beta condition accumulates both sides") {
  const auto ident = [](const Vec2&) { return Mat2::Identity().eval(); };
  const auto five = [](const Vec2&) { return (5.0 * Mat2::Identity()).eval(); };
  const auto hundred = [](const Vec2&) { return (100.0 * Mat2::Identity()).eval(); };
  const std::vector<std::pair<Vec2, Vec2>> samples{{Vec2(0.5, 0.2), Vec2(1.0, 0.0)},
                                                   {Vec2(0.5, 0.8), Vec2(1.0, 0.0)}};
  BetaCheck c = check_beta_condition(ident, ident, samples, 10.0);
  CHECK(c.ok);
  CHECK(c.norm_sq == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(!check_beta_condition(ident, ident, samples, 1.9).ok);

  c = check_beta_condition(five, ident, samples, 10.0);
  CHECK(c.norm_sq == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(c.ok);

  c = check_beta_condition(hundred, ident, samples, 10.0);
  CHECK(c.norm_sq == doctest::Approx(101.0).epsilon(1e-14));
  CHECK(!c.ok);
}

TEST_CASE("coupling: refined per-direction beta defaults") {
  // the fixed eigenvectors weight both sides by 1/2
  const auto b = refined_beta_defaults(1.0, 1.0);
  CHECK(b[0] == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(5.0).epsilon(1e-14));
  const auto b2 = refined_beta_defaults(5.0, 1.0);
  CHECK(b2[0] == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(b2[1] == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("coupling: refined penalty reduces to the uniform one for equal betas") {
  const InterfaceCoupling c = coupling_from_alpha_xi(2.0, 0.7);
  const double h = 0.02;
  const RobustPenalty uniform = robust_penalty(c, h, 10.0);
  const RobustPenalty refined = robust_penalty_refined(c, h, {10.0, 10.0});
  CHECK(refined.refined);
  for (int i = 0; i < 2; ++i) {
    CHECK(refined.tau[i] == doctest::Approx(uniform.tau[i]).epsilon(1e-14));
    CHECK(refined.c_ff[i] == doctest::Approx(uniform.c_ff[i]).epsilon(1e-14));
    CHECK(refined.c_fj[i] == doctest::Approx(uniform.c_fj[i]).epsilon(1e-14));
  }
}
