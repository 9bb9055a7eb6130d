#pragma once

#include <array>
#include <vector>

#include "cutfrac/types.hpp"

namespace cutfrac {

struct Triangle {
  std::array<int, 3> v; // node ids, CCW
};

struct Face {
  std::array<int, 2> v;        // node ids, v[0] < v[1]
  std::array<int, 2> elem;     // adjacent elements, -1 if none, elem[0] < elem[1]
  bool interior() const { return elem[0] >= 0 && elem[1] >= 0; }
};

struct FaceRecord {
  int face;      // index into mesh.faces
  double length;
  Vec2 normal;   // unit, points from lower- to higher-indexed adjacent element
  int elem_lo;
  int elem_hi;
};

// Structured triangulation of bbox: nx*ny squares, each split by the
// lower-left to upper-right diagonal.
struct BackgroundMesh {
  BBox bbox;
  int nx = 0, ny = 0;
  double h = 0.0; // max edge length (cell diagonal)
  std::vector<Vec2> nodes;
  std::vector<Triangle> triangles;
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> faces_of_triangle;

  std::array<Vec2, 3> triangle_vertices(int t) const {
    return {nodes[triangles[t].v[0]], nodes[triangles[t].v[1]], nodes[triangles[t].v[2]]};
  }
  double triangle_area(int t) const;
  Vec2 triangle_centroid(int t) const;
  bool on_boundary(const Vec2& p, double tol) const;
};

BackgroundMesh build_background_mesh(int nx, int ny, const BBox& bbox);

std::vector<FaceRecord> interior_faces(const BackgroundMesh& mesh);

} // namespace cutfrac
