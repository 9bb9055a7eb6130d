#include "cutfrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cutfrac/errors.hpp"

namespace cutfrac {

double BackgroundMesh::triangle_area(int t) const {
  const auto p = triangle_vertices(t);
  return 0.5 * ((p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                (p[2].x() - p[0].x()) * (p[1].y() - p[0].y()));
}

Vec2 BackgroundMesh::triangle_centroid(int t) const {
  const auto p = triangle_vertices(t);
  return (p[0] + p[1] + p[2]) / 3.0;
}

bool BackgroundMesh::on_boundary(const Vec2& p, double tol) const {
  return std::abs(p.x() - bbox.xmin) <= tol || std::abs(p.x() - bbox.xmax) <= tol ||
         std::abs(p.y() - bbox.ymin) <= tol || std::abs(p.y() - bbox.ymax) <= tol;
}

BackgroundMesh build_background_mesh(int nx, int ny, const BBox& bbox) {
  if (nx < 1 || ny < 1)
    throw ConfigError("mesh: cell counts must be positive, got nx=" + std::to_string(nx) +
                      " ny=" + std::to_string(ny));
  if (!(bbox.xmax > bbox.xmin) || !(bbox.ymax > bbox.ymin))
    throw ConfigError("mesh: degenerate bounding box");

  BackgroundMesh m;
  m.bbox = bbox;
  m.nx = nx;
  m.ny = ny;

  const double dx = bbox.width() / nx;
  const double dy = bbox.height() / ny;
  const double diag = std::hypot(dx, dy);
  m.h = diag;
  if (diag / std::min(dx, dy) > 3.0)
    throw ConfigError("mesh: quasi-uniformity ratio exceeds 3, adjust nx/ny to the bbox aspect");

  m.nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.emplace_back(bbox.xmin + i * dx, bbox.ymin + j * dy);

  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };

  m.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ll = node(i, j), lr = node(i + 1, j);
      const int ul = node(i, j + 1), ur = node(i + 1, j + 1);
      m.triangles.push_back({{ll, lr, ur}});
      m.triangles.push_back({{ll, ur, ul}});
    }
  }

  std::map<std::pair<int, int>, int> face_id;
  m.faces_of_triangle.resize(m.triangles.size());
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    const auto& tri = m.triangles[t].v;
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = face_id.try_emplace({a, b}, static_cast<int>(m.faces.size()));
      if (inserted) m.faces.push_back({{a, b}, {-1, -1}});
      Face& f = m.faces[it->second];
      if (f.elem[0] < 0)
        f.elem[0] = t;
      else
        f.elem[1] = t;
      m.faces_of_triangle[t][e] = it->second;
    }
  }
  for (auto& f : m.faces)
    if (f.interior() && f.elem[0] > f.elem[1]) std::swap(f.elem[0], f.elem[1]);

  return m;
}

std::vector<FaceRecord> interior_faces(const BackgroundMesh& mesh) {
  std::vector<FaceRecord> out;
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const Face& f = mesh.faces[fi];
    if (!f.interior()) continue;
    const Vec2 a = mesh.nodes[f.v[0]], b = mesh.nodes[f.v[1]];
    const Vec2 t = b - a;
    Vec2 n(t.y(), -t.x());
    n.normalize();
    const Vec2 dir = mesh.triangle_centroid(f.elem[1]) - mesh.triangle_centroid(f.elem[0]);
    if (n.dot(dir) < 0.0) n = -n;
    out.push_back({fi, t.norm(), n, f.elem[0], f.elem[1]});
  }
  return out;
}

} // namespace cutfrac
