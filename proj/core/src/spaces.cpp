#include "cutfrac/spaces.hpp"

#include <Eigen/SparseCore>
#include <cmath>
#include <unordered_map>

#include "cutfrac/errors.hpp"

namespace cutfrac {

ActiveDecomposition build_active_meshes(const BackgroundMesh& mesh, const Interface& gamma) {
  ActiveDecomposition d;
  const int ne = static_cast<int>(mesh.triangles.size());
  d.side.resize(ne);
  d.cut_of_elem.assign(ne, -1);

  for (int t = 0; t < ne; ++t) {
    const auto tri = mesh.triangle_vertices(t);
    const ElementSide s = classify_element(gamma, tri, mesh.h);
    d.side[t] = s;
    if (s != ElementSide::Inside2) d.elems1.push_back(t);
    if (s != ElementSide::Inside1) d.elems2.push_back(t);
    if (s == ElementSide::Cut) {
      d.cut_of_elem[t] = static_cast<int>(d.cuts.size());
      d.elemsG.push_back(t);
      d.cuts.push_back(cut_triangle(gamma, tri, t, mesh.h));
    }
  }
  if (d.elemsG.empty()) throw ConfigError("active meshes: interface does not cut the mesh");

  for (const FaceRecord& f : interior_faces(mesh)) {
    const ElementSide slo = d.side[f.elem_lo], shi = d.side[f.elem_hi];
    const bool any_cut = slo == ElementSide::Cut || shi == ElementSide::Cut;
    if (any_cut && slo != ElementSide::Inside2 && shi != ElementSide::Inside2)
      d.faces1.push_back(f.face);
    if (any_cut && slo != ElementSide::Inside1 && shi != ElementSide::Inside1)
      d.faces2.push_back(f.face);
    if (slo == ElementSide::Cut && shi == ElementSide::Cut) d.facesG.push_back(f.face);
  }
  return d;
}

SpaceSet build_spaces(const ActiveDecomposition& decomp, const BackgroundMesh& mesh) {
  SpaceSet s;
  const int nn = static_cast<int>(mesh.nodes.size());
  const std::array<const std::vector<int>*, 3> elem_sets = {&decomp.elems1, &decomp.elems2,
                                                            &decomp.elemsG};
  for (int f = 0; f < 3; ++f) {
    std::vector<char> active(nn, 0);
    for (int e : *elem_sets[f])
      for (int v : mesh.triangles[e].v) active[v] = 1;
    s.dof_of_node[f].assign(nn, -1);
    for (int n = 0; n < nn; ++n) {
      if (!active[n]) continue;
      s.dof_of_node[f][n] = s.count[f]++;
      s.active_nodes[f].push_back(n);
    }
  }
  s.offset = {0, s.count[0], s.count[0] + s.count[1]};
  s.total = s.count[0] + s.count[1] + s.count[2];
  return s;
}

P1Basis eval_basis(const BackgroundMesh& mesh, int element, const Vec2& p) {
  const auto v = mesh.triangle_vertices(element);
  const double det = (v[1].x() - v[0].x()) * (v[2].y() - v[0].y()) -
                     (v[2].x() - v[0].x()) * (v[1].y() - v[0].y());
  P1Basis b;
  // lambda_k = (areal coordinate of p opposite vertex k)
  b.value[0] = ((v[1].x() - p.x()) * (v[2].y() - p.y()) -
                (v[2].x() - p.x()) * (v[1].y() - p.y())) /
               det;
  b.value[1] = ((v[2].x() - p.x()) * (v[0].y() - p.y()) -
                (v[0].x() - p.x()) * (v[2].y() - p.y())) /
               det;
  b.value[2] = 1.0 - b.value[0] - b.value[1];
  const double tol = 1e-10;
  for (double lam : b.value)
    if (lam < -tol || lam > 1.0 + tol)
      throw GeometryError("eval_basis: point lies outside the element");
  b.grad[0] = Vec2(v[1].y() - v[2].y(), v[2].x() - v[1].x()) / det;
  b.grad[1] = Vec2(v[2].y() - v[0].y(), v[0].x() - v[2].x()) / det;
  b.grad[2] = Vec2(v[0].y() - v[1].y(), v[1].x() - v[0].x()) / det;
  return b;
}

AssembledSystem apply_dirichlet(const AssembledSystem& system, const DirichletSpec& spec,
                                const SpaceSet& spaces) {
  const int n = system.size();
  std::unordered_map<int, double> constrained;
  for (const auto& e : spec.entries) {
    const int d = spaces.dof(e.field, e.node);
    if (d < 0)
      throw ConfigError("dirichlet: node " + std::to_string(e.node) +
                        " is not active for field " + std::to_string(e.field));
    auto [it, inserted] = constrained.try_emplace(d, e.value);
    if (!inserted && it->second != e.value)
      throw ConfigError("dirichlet: conflicting values for one DOF");
  }

  Vector g = Vector::Zero(n);
  for (const auto& [d, val] : constrained) g[d] = val;

  AssembledSystem out;
  out.meta = system.meta;
  out.rhs = system.rhs - system.A * g;
  for (const auto& [d, val] : constrained) out.rhs[d] = val;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(system.A.nonZeros() + constrained.size());
  for (int k = 0; k < system.A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(system.A, k); it; ++it) {
      if (!constrained.count(static_cast<int>(it.row())) &&
          !constrained.count(static_cast<int>(it.col())))
        trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (const auto& [d, val] : constrained) trips.emplace_back(d, d, 1.0);
  out.A.resize(n, n);
  out.A.setFromTriplets(trips.begin(), trips.end());
  return out;
}

} // namespace cutfrac
