#include "cutfrac/cases.hpp"

#include <cmath>

#include "cutfrac/errors.hpp"

namespace cutfrac {

namespace {

MatFn constant_matrix(double a) {
  return [a](const Vec2&) { return Mat2(a * Mat2::Identity()); };
}

ScalarFn constant(double c) {
  return [c](const Vec2&) { return c; };
}

} // namespace

CaseSpec case_manufactured() {
  CaseSpec cs;
  cs.name = "manufactured";
  cs.bbox = {0.0, 0.0, 1.0, 1.0};
  cs.interface = std::make_shared<VerticalLineInterface>(0.5);
  cs.coeffs.A1 = constant_matrix(1.0);
  cs.coeffs.A2 = constant_matrix(1.0);
  cs.coeffs.AGamma = constant(1.0);
  cs.coeffs.f1 = cs.coeffs.f2 = [](const Vec2& p) {
    return 2.0 * p.x() * (1.0 - p.x()) + 2.0 * p.y() * (1.0 - p.y());
  };
  cs.coeffs.fGamma = constant(0.5);
  cs.alpha = constant(1.0);
  cs.dirichlet.push_back({{true, true, true}, [](const Vec2&) { return true; }, constant(0.0)});

  ExactSolution ex;
  ex.u1 = ex.u2 = [](const Vec2& p) {
    return p.x() * (1.0 - p.x()) * p.y() * (1.0 - p.y());
  };
  ex.grad_u1 = ex.grad_u2 = [](const Vec2& p) {
    return Vec2((1.0 - 2.0 * p.x()) * p.y() * (1.0 - p.y()),
                p.x() * (1.0 - p.x()) * (1.0 - 2.0 * p.y()));
  };
  ex.uGamma = [](const Vec2& p) { return 0.25 * p.y() * (1.0 - p.y()); };
  ex.grad_uGamma = [](const Vec2& p) { return Vec2(0.0, 0.25 * (1.0 - 2.0 * p.y())); };
  cs.exact = std::move(ex);
  return cs;
}

CaseSpec case_heterogeneous_crack(double gamma, const HeterogeneousCrackGeometry& geo) {
  if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
  if (geo.d <= 0.0) throw ConfigError("crack thickness d must be positive");
  CaseSpec cs;
  cs.name = "heterogeneous_crack";
  cs.bbox = {0.0, 0.0, 2.0, 1.0};
  cs.interface = std::make_shared<VerticalLineInterface>(geo.crack_x);
  cs.coeffs.A1 = constant_matrix(1.0);
  cs.coeffs.A2 = constant_matrix(1.0);
  const auto a_gamma = [geo](double y) {
    return (y > geo.band_lo && y < geo.band_hi) ? geo.a_low : geo.a_high;
  };
  cs.coeffs.AGamma = [a_gamma, geo](const Vec2& p) { return a_gamma(p.y()) * geo.d; };
  cs.coeffs.d = geo.d;
  cs.coeffs.f1 = cs.coeffs.f2 = constant(0.0);
  cs.coeffs.fGamma = constant(0.0);
  cs.alpha = [a_gamma, geo](const Vec2& p) { return 2.0 * a_gamma(p.y()) / geo.d; };
  cs.gamma = gamma;

  const double xmax = cs.bbox.xmax, tol = 1e-9;
  cs.dirichlet.push_back(
      {{true, true, false}, [xmax, tol](const Vec2& p) { return std::abs(p.x() - xmax) < tol; },
       constant(1.0)});
  cs.dirichlet.push_back(
      {{true, true, false}, [tol](const Vec2& p) { return std::abs(p.x()) < tol; },
       constant(0.0)});
  return cs;
}

CaseSpec case_quarter_circle(double d, const QuarterCircleGeometry& geo) {
  if (d <= 0.0) throw ConfigError("crack thickness d must be positive");
  if (geo.radius <= 0.0) throw ConfigError("arc radius must be positive");
  CaseSpec cs;
  cs.name = "quarter_circle";
  cs.bbox = {0.0, 0.0, 1.0, 1.0};
  cs.interface = std::make_shared<CircularArcInterface>(geo.center, geo.radius);
  cs.coeffs.A1 = constant_matrix(5.0); // inside the arc
  cs.coeffs.A2 = constant_matrix(1.0);
  cs.coeffs.AGamma = constant(geo.a_gamma * d);
  cs.coeffs.d = d;
  cs.coeffs.f1 = cs.coeffs.f2 = constant(0.0);
  cs.coeffs.fGamma = constant(0.0);
  cs.alpha = constant(2.0 * geo.a_gamma / d);

  // Boundary values apply to every field active at the node, so band nodes
  // on the boundary inherit the bulk data.
  const double xmax = cs.bbox.xmax, tol = 1e-9;
  cs.dirichlet.push_back(
      {{true, true, true}, [xmax, tol](const Vec2& p) { return std::abs(p.x() - xmax) < tol; },
       constant(1.0)});
  cs.dirichlet.push_back(
      {{true, true, true}, [tol](const Vec2& p) { return std::abs(p.x()) < tol; },
       constant(0.0)});
  return cs;
}

} // namespace cutfrac
