#pragma once

#include <array>
#include <memory>
#include <vector>

#include "cutfrac/types.hpp"

namespace cutfrac {

// Interfaces are level sets: side 1 is phi < 0, side 2 is phi > 0, and the
// unit normal points from side 1 into side 2.
struct Interface {
  virtual ~Interface() = default;
  virtual double levelset(const Vec2& p) const = 0;
  virtual Vec2 normal(const Vec2& p) const = 0;
};

class VerticalLineInterface final : public Interface {
public:
  explicit VerticalLineInterface(double x0) : x0_(x0) {}
  double levelset(const Vec2& p) const override { return p.x() - x0_; }
  Vec2 normal(const Vec2&) const override { return {1.0, 0.0}; }
  double x0() const { return x0_; }

private:
  double x0_;
};

class CircularArcInterface final : public Interface {
public:
  CircularArcInterface(const Vec2& center, double radius)
      : center_(center), radius_(radius) {}
  double levelset(const Vec2& p) const override { return (p - center_).norm() - radius_; }
  Vec2 normal(const Vec2& p) const override { return (p - center_).normalized(); }
  const Vec2& center() const { return center_; }
  double radius() const { return radius_; }

private:
  Vec2 center_;
  double radius_;
};

// Level set negated, normal flipped: relabels sides 1 and 2.
class FlippedInterface final : public Interface {
public:
  explicit FlippedInterface(std::shared_ptr<const Interface> base) : base_(std::move(base)) {}
  double levelset(const Vec2& p) const override { return -base_->levelset(p); }
  Vec2 normal(const Vec2& p) const override { return -base_->normal(p); }

private:
  std::shared_ptr<const Interface> base_;
};

enum class ElementSide { Inside1, Inside2, Cut };

// Vertex values with |phi| < 1e-12*h count as positive (snapping).
ElementSide classify_element(const Interface& gamma, const std::array<Vec2, 3>& tri, double h);

struct CutCell {
  int element = -1;
  std::vector<Vec2> poly1, poly2; // CCW sub-polygons, 3 or 4 vertices (empty when degenerate)
  Vec2 seg_a, seg_b;              // chord endpoints
  Vec2 seg_normal;                // analytic normal at the chord midpoint
  bool degenerate = false;        // intersection points coincide: zero-measure cut
  double segment_length() const { return (seg_b - seg_a).norm(); }
  Vec2 seg_midpoint() const { return 0.5 * (seg_a + seg_b); }
};

// Chord linearization of the interface inside one cut triangle. A degenerate
// result (vertex touch after snapping) carries a zero-length segment and a
// one-sided polygon split; callers may reclassify the element instead.
CutCell cut_triangle(const Interface& gamma, const std::array<Vec2, 3>& tri, int element, double h);

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  double total() const;
};

// Fan triangulation + 6-point degree-4 triangle rule. degree must be <= 4.
QuadratureRule polygon_quadrature(const std::vector<Vec2>& poly, int degree = 4);

// 3-point Gauss-Legendre, exact to degree 5. degree must be <= 5.
QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int degree = 5);

double polygon_area(const std::vector<Vec2>& poly);

} // namespace cutfrac
