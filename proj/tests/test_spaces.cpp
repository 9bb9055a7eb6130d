#include <doctest.h>

#include <random>

#include <cutfrac/errors.hpp>
#include <cutfrac/spaces.hpp>

using namespace cutfrac;

TEST_CASE("spaces: active meshes when the crack lies on a grid line") {
  const BackgroundMesh mesh = build_background_mesh(2, 2, BBox{0.0, 0.0, 1.0, 1.0});
  const VerticalLineInterface line(0.5);
  const ActiveDecomposition d = build_active_meshes(mesh, line);
  // snapping pushes the x = 1/2 nodes to side 2, so the whole left column cuts
  CHECK(d.elemsG.size() == 4);
  CHECK(d.elems1.size() == 4);
  CHECK(d.elems2.size() == 8);
  int degenerate = 0;
  for (const auto& c : d.cuts) degenerate += c.degenerate ? 1 : 0;
  CHECK(degenerate == 2);
  const SpaceSet s = build_spaces(d, mesh);
  CHECK(s.count[kField1] == 6);
  CHECK(s.count[kField2] == 9);
  CHECK(s.count[kFieldGamma] == 6);
  CHECK(s.total == 21);
}

TEST_CASE("spaces: a generic vertical crack cuts two triangles per row") {
  const VerticalLineInterface line(0.5);
  for (int n : {11, 23}) {
    const BackgroundMesh mesh = build_background_mesh(n, n, BBox{0.0, 0.0, 1.0, 1.0});
    const ActiveDecomposition d = build_active_meshes(mesh, line);
    CHECK(d.elemsG.size() == static_cast<std::size_t>(2 * n));
    for (const auto& c : d.cuts) CHECK(!c.degenerate);
    // every cut element is active on both sides
    for (int e : d.elemsG) {
      CHECK(d.active(kField1, e));
      CHECK(d.active(kField2, e));
      CHECK(d.active(kFieldGamma, e));
    }
  }
}

TEST_CASE("spaces: interface missing the mesh is a config error") {
  const BackgroundMesh mesh = build_background_mesh(3, 3, BBox{0.0, 0.0, 1.0, 1.0});
  const VerticalLineInterface line(7.0);
  CHECK_THROWS_AS(build_active_meshes(mesh, line), ConfigError);
}

TEST_CASE("spaces: block ordering and dof lookups") {
  const BackgroundMesh mesh = build_background_mesh(5, 5, BBox{0.0, 0.0, 1.0, 1.0});
  const VerticalLineInterface line(0.5);
  const ActiveDecomposition d = build_active_meshes(mesh, line);
  const SpaceSet s = build_spaces(d, mesh);
  CHECK(s.total == s.count[0] + s.count[1] + s.count[2]);
  CHECK(s.offset[0] == 0);
  CHECK(s.offset[1] == s.count[0]);
  CHECK(s.offset[2] == s.count[0] + s.count[1]);
  // dofs are consecutive and stay inside their block
  for (int f = 0; f < 3; ++f) {
    std::vector<bool> seen(s.count[f], false);
    for (int n = 0; n < static_cast<int>(mesh.nodes.size()); ++n) {
      const int dof = s.dof(f, n);
      if (dof < 0) continue;
      CHECK(dof >= s.offset[f]);
      CHECK(dof < s.offset[f] + s.count[f]);
      seen[dof - s.offset[f]] = true;
    }
    for (bool b : seen) CHECK(b);
  }
  // a node far from the crack is inactive for the band field
  int corner = 0; // node (0, 0)
  CHECK(s.dof(kFieldGamma, corner) < 0);
}

TEST_CASE("spaces: partition of unity and zero gradient sum") {
  const BackgroundMesh mesh = build_background_mesh(5, 5, BBox{0.0, 0.0, 1.0, 1.0});
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int e = static_cast<int>(rng() % mesh.triangles.size());
    double b0 = unit(rng), b1 = unit(rng);
    if (b0 + b1 > 1.0) {
      b0 = 1.0 - b0;
      b1 = 1.0 - b1;
    }
    const auto tv = mesh.triangle_vertices(e);
    const Vec2 p = tv[0] + b0 * (tv[1] - tv[0]) + b1 * (tv[2] - tv[0]);
    const P1Basis basis = eval_basis(mesh, e, p);
    CHECK(std::abs(basis.value[0] + basis.value[1] + basis.value[2] - 1.0) <= 1e-13);
    CHECK((basis.grad[0] + basis.grad[1] + basis.grad[2]).norm() <= 1e-12);
    for (int k = 0; k < 3; ++k) {
      // nodal interpolation property: value 1 at own vertex
      const P1Basis at_vertex = eval_basis(mesh, e, tv[k]);
      CHECK(at_vertex.value[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("spaces: P1 gradients reproduce the element stiffness matrix") {
  const BackgroundMesh mesh = build_background_mesh(1, 1, BBox{0.0, 0.0, 1.0, 1.0});
  // element 0 is the lower triangle (0,0), (1,0), (1,1)
  const P1Basis basis = eval_basis(mesh, 0, mesh.triangle_centroid(0));
  const double area = mesh.triangle_area(0);
  Eigen::Matrix3d K;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) K(a, b) = area * basis.grad[a].dot(basis.grad[b]);
  Eigen::Matrix3d expected;
  expected << 1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0;
  expected *= 0.5;
  CHECK((K - expected).norm() <= 1e-13);
}

TEST_CASE("spaces: eval_basis rejects points outside the element") {
  const BackgroundMesh mesh = build_background_mesh(2, 2, BBox{0.0, 0.0, 1.0, 1.0});
  CHECK_THROWS_AS(eval_basis(mesh, 0, Vec2(0.9, 0.9)), GeometryError);
}

TEST_CASE("spaces: dirichlet elimination worked example") {
  const BackgroundMesh mesh = build_background_mesh(3, 3, BBox{0.0, 0.0, 1.0, 1.0});
  const VerticalLineInterface line(0.37);
  const ActiveDecomposition d = build_active_meshes(mesh, line);
  const SpaceSet s = build_spaces(d, mesh);

  const int node0 = 0, node1 = 1; // (0,0) and (1/3,0), both on side 1
  const int d0 = s.dof(kField1, node0);
  const int d1 = s.dof(kField1, node1);
  REQUIRE(d0 >= 0);
  REQUIRE(d1 >= 0);

  AssembledSystem sys;
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < s.total; ++i) trips.emplace_back(i, i, 1.0);
  trips.emplace_back(d0, d1, 0.5);
  trips.emplace_back(d1, d0, 0.5);
  sys.A.resize(s.total, s.total);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = Vector::Zero(s.total);

  DirichletSpec spec;
  spec.entries.push_back({kField1, node0, 3.0});
  const AssembledSystem out = apply_dirichlet(sys, spec, s);
  CHECK(out.A.coeff(d0, d0) == 1.0);
  CHECK(out.A.coeff(d0, d1) == 0.0);
  CHECK(out.A.coeff(d1, d0) == 0.0);
  CHECK(out.A.coeff(d1, d1) == 1.0);
  CHECK(out.rhs[d0] == 3.0);
  CHECK(out.rhs[d1] == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("spaces: dirichlet conflicts and inactive nodes are rejected") {
  const BackgroundMesh mesh = build_background_mesh(3, 3, BBox{0.0, 0.0, 1.0, 1.0});
  const VerticalLineInterface line(0.37);
  const ActiveDecomposition d = build_active_meshes(mesh, line);
  const SpaceSet s = build_spaces(d, mesh);
  AssembledSystem sys;
  sys.A.resize(s.total, s.total);
  sys.A.setIdentity();
  sys.rhs = Vector::Zero(s.total);

  DirichletSpec conflicting;
  conflicting.entries.push_back({kField1, 0, 1.0});
  conflicting.entries.push_back({kField1, 0, 2.0});
  CHECK_THROWS_AS(apply_dirichlet(sys, conflicting, s), ConfigError);

  DirichletSpec repeated; // same value twice is fine
  repeated.entries.push_back({kField1, 0, 1.0});
  repeated.entries.push_back({kField1, 0, 1.0});
  CHECK_NOTHROW(apply_dirichlet(sys, repeated, s));

  DirichletSpec inactive; // corner node carries no band dof
  inactive.entries.push_back({kFieldGamma, 0, 0.0});
  CHECK_THROWS_AS(apply_dirichlet(sys, inactive, s), ConfigError);
}
