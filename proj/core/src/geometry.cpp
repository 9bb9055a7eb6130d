#include "cutfrac/geometry.hpp"

#include <cmath>

#include "cutfrac/errors.hpp"

namespace cutfrac {

namespace {

constexpr double kSnapRel = 1e-12;       // vertex snapping, relative to h
constexpr double kCoincideRel = 1e-10;   // chord endpoints closer than this are one point

int snapped_sign(double phi, double eps) { return (std::abs(phi) < eps || phi > 0.0) ? 1 : -1; }

// Root of phi along the edge a-b. Starts from the linear interpolant of the
// endpoint values and falsi-refines so chord endpoints land on the curve
// itself, not on its secant (matters for circular arcs).
Vec2 edge_intersection(const Interface& gamma, const Vec2& a, const Vec2& b, double pa, double pb,
                       double h) {
  double lo = 0.0, hi = 1.0, flo = pa, fhi = pb;
  double t = pa / (pa - pb);
  const double tol = 1e-12 * h;
  for (int it = 0; it < 60; ++it) {
    const Vec2 p = a + t * (b - a);
    const double f = gamma.levelset(p);
    if (std::abs(f) <= tol) return p;
    if ((f < 0.0) == (flo < 0.0)) {
      lo = t;
      flo = f;
    } else {
      hi = t;
      fhi = f;
    }
    t = lo + (hi - lo) * flo / (flo - fhi);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
  }
  return a + t * (b - a);
}

} // namespace

ElementSide classify_element(const Interface& gamma, const std::array<Vec2, 3>& tri, double h) {
  const double eps = kSnapRel * h;
  int pos = 0, neg = 0;
  for (const auto& p : tri)
    (snapped_sign(gamma.levelset(p), eps) > 0 ? pos : neg)++;
  if (pos > 0 && neg > 0) return ElementSide::Cut;
  return neg == 3 ? ElementSide::Inside1 : ElementSide::Inside2;
}

CutCell cut_triangle(const Interface& gamma, const std::array<Vec2, 3>& tri, int element,
                     double h) {
  const double eps = kSnapRel * h;
  std::array<double, 3> phi;
  std::array<int, 3> sign;
  for (int k = 0; k < 3; ++k) {
    phi[k] = gamma.levelset(tri[k]);
    if (std::abs(phi[k]) < eps) phi[k] = 0.0;
    sign[k] = snapped_sign(phi[k], eps);
  }
  if (sign[0] == sign[1] && sign[1] == sign[2])
    throw GeometryError("cut_triangle: element is not cut by the interface");

  CutCell cell;
  cell.element = element;
  std::vector<Vec2> cross;
  for (int k = 0; k < 3; ++k) {
    const int k1 = (k + 1) % 3;
    if (sign[k] < 0)
      cell.poly1.push_back(tri[k]);
    else
      cell.poly2.push_back(tri[k]);
    if (sign[k] != sign[k1]) {
      Vec2 p;
      if (phi[k] == 0.0)
        p = tri[k];
      else if (phi[k1] == 0.0)
        p = tri[k1];
      else
        p = edge_intersection(gamma, tri[k], tri[k1], phi[k], phi[k1], h);
      cell.poly1.push_back(p);
      cell.poly2.push_back(p);
      cross.push_back(p);
    }
  }
  cell.seg_a = cross[0];
  cell.seg_b = cross[1];

  if ((cell.seg_b - cell.seg_a).norm() <= kCoincideRel * h) {
    cell.degenerate = true;
    cell.seg_b = cell.seg_a;
    const Vec2 c = (tri[0] + tri[1] + tri[2]) / 3.0;
    std::vector<Vec2> full(tri.begin(), tri.end());
    if (gamma.levelset(c) < 0.0) {
      cell.poly1 = std::move(full);
      cell.poly2.clear();
    } else {
      cell.poly2 = std::move(full);
      cell.poly1.clear();
    }
    cell.seg_normal = gamma.normal(cell.seg_a);
    return cell;
  }

  cell.seg_normal = gamma.normal(cell.seg_midpoint());
  return cell;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int k = 0; k < n; ++k) {
    const Vec2& p = poly[k];
    const Vec2& q = poly[(k + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double QuadratureRule::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

QuadratureRule polygon_quadrature(const std::vector<Vec2>& poly, int degree) {
  if (degree > 4) throw ConfigError("polygon_quadrature: rule is exact to degree 4 only");
  if (poly.size() < 3)
    throw GeometryError("polygon_quadrature: polygon needs at least 3 vertices");

  // Degree-4 symmetric rule on the triangle, 6 points, weights sum to 1.
  static const double w1 = 0.223381589678011, a1 = 0.445948490915965;
  static const double w2 = 0.109951743655322, a2 = 0.091576213509771;
  static const std::array<std::array<double, 3>, 6> bary = {{
      {1.0 - 2.0 * a1, a1, a1},
      {a1, 1.0 - 2.0 * a1, a1},
      {a1, a1, 1.0 - 2.0 * a1},
      {1.0 - 2.0 * a2, a2, a2},
      {a2, 1.0 - 2.0 * a2, a2},
      {a2, a2, 1.0 - 2.0 * a2},
  }};
  static const std::array<double, 6> wts = {w1, w1, w1, w2, w2, w2};

  double diam2 = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j)
      diam2 = std::max(diam2, (poly[i] - poly[j]).squaredNorm());

  QuadratureRule rule;
  for (size_t k = 1; k + 1 < poly.size(); ++k) {
    const Vec2& p0 = poly[0];
    const Vec2& p1 = poly[k];
    const Vec2& p2 = poly[k + 1];
    const double area =
        0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
    if (std::abs(area) <= 1e-14 * diam2) continue; // degenerate fan triangle
    if (area < 0.0)
      throw GeometryError("polygon_quadrature: polygon is not counterclockwise or not convex");
    for (int q = 0; q < 6; ++q) {
      rule.points.push_back(bary[q][0] * p0 + bary[q][1] * p1 + bary[q][2] * p2);
      rule.weights.push_back(wts[q] * area);
    }
  }
  return rule;
}

QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int degree) {
  if (degree > 5) throw ConfigError("segment_quadrature: rule is exact to degree 5 only");
  const double len = (b - a).norm();
  if (len <= 0.0) throw GeometryError("segment_quadrature: zero-length segment");

  static const double x1 = std::sqrt(3.0 / 5.0);
  static const std::array<double, 3> xi = {-x1, 0.0, x1};
  static const std::array<double, 3> wt = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

  QuadratureRule rule;
  const Vec2 mid = 0.5 * (a + b);
  const Vec2 half = 0.5 * (b - a);
  for (int q = 0; q < 3; ++q) {
    rule.points.push_back(mid + xi[q] * half);
    rule.weights.push_back(wt[q] * 0.5 * len);
  }
  return rule;
}

} // namespace cutfrac
