#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cutfrac/assembly.hpp"
#include "cutfrac/geometry.hpp"

namespace cutfrac {

struct ExactSolution {
  ScalarFn u1, u2, uGamma;
  VecFn grad_u1, grad_u2;
  VecFn grad_uGamma; // gradient of the band extension; projected tangentially where used
};

// Dirichlet data on a piece of the domain boundary. `on` selects boundary
// nodes; entries are generated only for fields active at the node.
struct BoundaryPatch {
  std::array<bool, 3> fields{true, true, false};
  std::function<bool(const Vec2&)> on;
  ScalarFn value;
};

struct CaseSpec {
  std::string name;
  BBox bbox;
  std::shared_ptr<const Interface> interface;
  Coefficients coeffs;
  ScalarFn alpha; // coupling strength along the crack
  double xi = 1.0;
  double beta = 10.0;
  double gamma = 1.0;
  StabilizationToggles stab;
  std::vector<BoundaryPatch> dirichlet;
  std::optional<ExactSolution> exact;
};

// Unit square, vertical crack at x = 1/2, unit coefficients, known solution
// u = x(1-x)y(1-y), uGamma = y(1-y)/4; the coupling residual vanishes for
// every admissible B, so (alpha, xi) can be swept freely.
CaseSpec case_manufactured();

// Crack with a low-permeability middle section blocking horizontal flow.
struct HeterogeneousCrackGeometry {
  double crack_x = 1.0;
  double a_low = 2e-3; // crack permeability on band_lo < y < band_hi
  double a_high = 1.0;
  double band_lo = 0.25, band_hi = 0.75;
  double d = 0.01; // crack thickness
};
CaseSpec case_heterogeneous_crack(double gamma,
                                  const HeterogeneousCrackGeometry& geo = {});

// Quarter-circle crack; shrinking thickness d drives alpha = 2 a_Gamma / d up.
struct QuarterCircleGeometry {
  Vec2 center{0.0, 0.0};
  double radius = 0.75;
  double a_gamma = 0.1;
};
CaseSpec case_quarter_circle(double d, const QuarterCircleGeometry& geo = {});

} // namespace cutfrac
