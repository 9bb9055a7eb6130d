#include "cutfrac/assembly.hpp"

#include <cmath>

#include "cutfrac/errors.hpp"

namespace cutfrac {

namespace {

double max_eigenvalue(const Mat2& A) {
  const double tr = A(0, 0) + A(1, 1);
  const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
  return 0.5 * tr + disc;
}

// Local symmetric block inserted with bitwise-symmetric values.
template <int N>
void insert_local(SparseSymmetric& out, const std::array<int, N>& dofs,
                  Eigen::Matrix<double, N, N>& M) {
  M = 0.5 * (M + M.transpose()).eval();
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      if (dofs[a] >= 0 && dofs[b] >= 0) out.add(dofs[a], dofs[b], M(a, b));
}

std::array<int, 3> field_dofs(const AssemblyContext& ctx, int field, int elem) {
  const auto& tri = ctx.mesh.triangles[elem].v;
  return {ctx.spaces.dof(field, tri[0]), ctx.spaces.dof(field, tri[1]),
          ctx.spaces.dof(field, tri[2])};
}

// Local dofs of a cut element in field-major order: 3 of field 1, 3 of
// field 2, 3 of the crack field.
std::array<int, 9> cut_element_dofs(const AssemblyContext& ctx, int elem) {
  std::array<int, 9> dofs;
  for (int f = 0; f < 3; ++f) {
    const auto fd = field_dofs(ctx, f, elem);
    for (int k = 0; k < 3; ++k) dofs[3 * f + k] = fd[k];
  }
  return dofs;
}

std::vector<Vec2> element_polygon(const AssemblyContext& ctx, int field, int elem) {
  if (const CutCell* cc = ctx.decomp.cut(elem))
    return field == kField1 ? cc->poly1 : cc->poly2;
  const auto v = ctx.mesh.triangle_vertices(elem);
  return {v[0], v[1], v[2]};
}

} // namespace

SparseSymmetric assemble_bulk_stiffness(const AssemblyContext& ctx, const Coefficients& coeffs) {
  SparseSymmetric out(ctx.spaces.total);
  const std::array<const std::vector<int>*, 2> elem_sets = {&ctx.decomp.elems1,
                                                            &ctx.decomp.elems2};
  const std::array<const MatFn*, 2> As = {&coeffs.A1, &coeffs.A2};
  for (int f = 0; f < 2; ++f) {
    for (int e : *elem_sets[f]) {
      const std::vector<Vec2> poly = element_polygon(ctx, f, e);
      if (poly.size() < 3) continue;
      const QuadratureRule rule = polygon_quadrature(poly);
      if (rule.points.empty()) continue;
      const P1Basis basis = eval_basis(ctx.mesh, e, ctx.mesh.triangle_centroid(e));
      Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Mat2 A = (*As[f])(rule.points[q]);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            M(a, b) += rule.weights[q] * basis.grad[a].dot(A * basis.grad[b]);
      }
      auto dofs = field_dofs(ctx, f, e);
      insert_local<3>(out, dofs, M);
    }
  }
  return out;
}

SparseSymmetric assemble_interface_stiffness(const AssemblyContext& ctx,
                                             const Coefficients& coeffs) {
  SparseSymmetric out(ctx.spaces.total);
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const double aG = coeffs.AGamma(cc.seg_midpoint());
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    const P1Basis basis = eval_basis(ctx.mesh, cc.element, cc.seg_midpoint());
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 n = ctx.interface.normal(rule.points[q]);
      std::array<Vec2, 3> tg;
      for (int a = 0; a < 3; ++a) tg[a] = basis.grad[a] - n.dot(basis.grad[a]) * n;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) M(a, b) += rule.weights[q] * aG * tg[a].dot(tg[b]);
    }
    auto dofs = field_dofs(ctx, kFieldGamma, cc.element);
    insert_local<3>(out, dofs, M);
  }
  return out;
}

namespace {

// Jump vector J(v) = (v1 - vG, v2 - vG) for the 9 local basis functions.
std::array<Vec2, 9> jump_vectors(const std::array<double, 3>& value) {
  std::array<Vec2, 9> J;
  for (int k = 0; k < 3; ++k) {
    J[k] = Vec2(value[k], 0.0);
    J[3 + k] = Vec2(0.0, value[k]);
    J[6 + k] = Vec2(-value[k], -value[k]);
  }
  return J;
}

} // namespace

SparseSymmetric assemble_standard_coupling(const AssemblyContext& ctx,
                                           const CouplingField& coupling) {
  SparseSymmetric out(ctx.spaces.total);
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const InterfaceCoupling ic =
        coupling_from_alpha_xi(coupling.alpha(cc.seg_midpoint()), coupling.xi);
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    Eigen::Matrix<double, 9, 9> M = Eigen::Matrix<double, 9, 9>::Zero();
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const P1Basis basis = eval_basis(ctx.mesh, cc.element, rule.points[q]);
      const auto J = jump_vectors(basis.value);
      for (int a = 0; a < 9; ++a) {
        const Vec2 BJa = ic.B * J[a];
        for (int b = 0; b < 9; ++b) M(a, b) += rule.weights[q] * BJa.dot(J[b]);
      }
    }
    auto dofs = cut_element_dofs(ctx, cc.element);
    insert_local<9>(out, dofs, M);
  }
  return out;
}

SparseSymmetric assemble_robust_coupling(const AssemblyContext& ctx, const CouplingField& coupling,
                                         const PenaltyParams& penalty,
                                         const Coefficients& coeffs) {
  SparseSymmetric out(ctx.spaces.total);
  const double h = ctx.mesh.h;
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const InterfaceCoupling ic =
        coupling_from_alpha_xi(coupling.alpha(cc.seg_midpoint()), coupling.xi);
    const RobustPenalty rp = penalty.refined
                                 ? robust_penalty_refined(ic, h, penalty.beta_dir)
                                 : robust_penalty(ic, h, penalty.beta);
    const Mat2 Mff = rp.Mff(), Mfj = rp.Mfj(), Mjj = rp.Mjj();
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    Eigen::Matrix<double, 9, 9> M = Eigen::Matrix<double, 9, 9>::Zero();
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const P1Basis basis = eval_basis(ctx.mesh, cc.element, rule.points[q]);
      const Vec2 n = ctx.interface.normal(rule.points[q]);
      const Mat2 A1 = coeffs.A1(rule.points[q]);
      const Mat2 A2 = coeffs.A2(rule.points[q]);
      const auto J = jump_vectors(basis.value);
      std::array<Vec2, 9> F;
      for (int k = 0; k < 3; ++k) {
        F[k] = Vec2(n.dot(A1 * basis.grad[k]), 0.0);
        F[3 + k] = Vec2(0.0, -n.dot(A2 * basis.grad[k]));
        F[6 + k] = Vec2(0.0, 0.0);
      }
      const double w = rule.weights[q];
      for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b)
          M(a, b) += w * (F[a].dot(Mff * F[b]) + F[a].dot(Mfj * J[b]) + F[b].dot(Mfj * J[a]) +
                          J[a].dot(Mjj * J[b]));
    }
    auto dofs = cut_element_dofs(ctx, cc.element);
    insert_local<9>(out, dofs, M);
  }
  return out;
}

namespace {

struct FaceGeometry {
  double length;
  Vec2 normal;
  int elem_lo, elem_hi;
};

FaceGeometry face_geometry(const BackgroundMesh& mesh, int face_id) {
  const Face& f = mesh.faces[face_id];
  const Vec2 a = mesh.nodes[f.v[0]], b = mesh.nodes[f.v[1]];
  const Vec2 t = b - a;
  Vec2 n(t.y(), -t.x());
  n.normalize();
  if (n.dot(mesh.triangle_centroid(f.elem[1]) - mesh.triangle_centroid(f.elem[0])) < 0.0) n = -n;
  return {t.norm(), n, f.elem[0], f.elem[1]};
}

// Face-jump penalty for one field across one face: the P1 normal-gradient
// jump is constant, so the face integral is length * jump_a * jump_b.
void add_face_jump(SparseSymmetric& out, const AssemblyContext& ctx, int field, int face_id,
                   double scale) {
  const FaceGeometry fg = face_geometry(ctx.mesh, face_id);
  const P1Basis blo = eval_basis(ctx.mesh, fg.elem_lo, ctx.mesh.triangle_centroid(fg.elem_lo));
  const P1Basis bhi = eval_basis(ctx.mesh, fg.elem_hi, ctx.mesh.triangle_centroid(fg.elem_hi));

  std::array<int, 4> nodes{};
  int nn = 0;
  for (int v : ctx.mesh.triangles[fg.elem_lo].v) nodes[nn++] = v;
  for (int v : ctx.mesh.triangles[fg.elem_hi].v) {
    bool seen = false;
    for (int k = 0; k < nn; ++k) seen = seen || nodes[k] == v;
    if (!seen) nodes[nn++] = v;
  }

  std::array<double, 4> jump{};
  std::array<int, 4> dofs{};
  for (int k = 0; k < nn; ++k) {
    double j = 0.0;
    for (int l = 0; l < 3; ++l) {
      if (ctx.mesh.triangles[fg.elem_lo].v[l] == nodes[k]) j += fg.normal.dot(blo.grad[l]);
      if (ctx.mesh.triangles[fg.elem_hi].v[l] == nodes[k]) j -= fg.normal.dot(bhi.grad[l]);
    }
    jump[k] = j;
    dofs[k] = ctx.spaces.dof(field, nodes[k]);
  }

  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b) M(a, b) = scale * fg.length * jump[a] * jump[b];
  insert_local<4>(out, dofs, M);
}

double zeta_bulk(const BackgroundMesh& mesh, const MatFn& A, int face_id) {
  const Face& f = mesh.faces[face_id];
  const Vec2 a = mesh.nodes[f.v[0]], b = mesh.nodes[f.v[1]];
  double z = max_eigenvalue(A(0.5 * (a + b)));
  z = std::max(z, max_eigenvalue(A(a)));
  z = std::max(z, max_eigenvalue(A(b)));
  return z;
}

} // namespace

SparseSymmetric assemble_ghost_penalty(const AssemblyContext& ctx, const Coefficients& coeffs,
                                       double gamma, const StabilizationToggles& toggles) {
  SparseSymmetric out(ctx.spaces.total);
  if (gamma == 0.0) return out;
  const double h = ctx.mesh.h;

  if (toggles.bulk_jumps) {
    const std::array<const std::vector<int>*, 2> face_sets = {&ctx.decomp.faces1,
                                                              &ctx.decomp.faces2};
    const std::array<const MatFn*, 2> As = {&coeffs.A1, &coeffs.A2};
    for (int f = 0; f < 2; ++f) {
      for (int fid : *face_sets[f]) {
        const double hF = face_geometry(ctx.mesh, fid).length;
        add_face_jump(out, ctx, f, fid, gamma * hF * zeta_bulk(ctx.mesh, *As[f], fid));
      }
    }
  }

  if (toggles.band_jumps) {
    for (int fid : ctx.decomp.facesG) {
      const Face& face = ctx.mesh.faces[fid];
      double zeta = 0.0;
      for (int e : face.elem)
        if (const CutCell* cc = ctx.decomp.cut(e))
          zeta = std::max(zeta, coeffs.AGamma(cc->seg_midpoint()));
      const double hF = face_geometry(ctx.mesh, fid).length;
      add_face_jump(out, ctx, kFieldGamma, fid, gamma * hF * zeta);
    }
  }

  if (toggles.band_normal) {
    for (const CutCell& cc : ctx.decomp.cuts) {
      if (cc.segment_length() <= 0.0) continue;
      const double zeta = coeffs.AGamma(cc.seg_midpoint());
      const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
      const P1Basis basis = eval_basis(ctx.mesh, cc.element, cc.seg_midpoint());
      Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 n = ctx.interface.normal(rule.points[q]);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            M(a, b) += rule.weights[q] * gamma * h * h * zeta * n.dot(basis.grad[a]) *
                       n.dot(basis.grad[b]);
      }
      auto dofs = field_dofs(ctx, kFieldGamma, cc.element);
      insert_local<3>(out, dofs, M);
    }
  }
  return out;
}

Vector assemble_load(const AssemblyContext& ctx, const Coefficients& coeffs) {
  Vector rhs = Vector::Zero(ctx.spaces.total);
  const std::array<const std::vector<int>*, 2> elem_sets = {&ctx.decomp.elems1,
                                                            &ctx.decomp.elems2};
  const std::array<const ScalarFn*, 2> fs = {&coeffs.f1, &coeffs.f2};
  for (int f = 0; f < 2; ++f) {
    for (int e : *elem_sets[f]) {
      const std::vector<Vec2> poly = element_polygon(ctx, f, e);
      if (poly.size() < 3) continue;
      const QuadratureRule rule = polygon_quadrature(poly);
      auto dofs = field_dofs(ctx, f, e);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const P1Basis basis = eval_basis(ctx.mesh, e, rule.points[q]);
        const double fv = (*fs[f])(rule.points[q]);
        for (int a = 0; a < 3; ++a)
          if (dofs[a] >= 0) rhs[dofs[a]] += rule.weights[q] * fv * basis.value[a];
      }
    }
  }

  const double d_scale = coeffs.d ? *coeffs.d : 1.0;
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    auto dofs = field_dofs(ctx, kFieldGamma, cc.element);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const P1Basis basis = eval_basis(ctx.mesh, cc.element, rule.points[q]);
      const double fv = d_scale * coeffs.fGamma(rule.points[q]);
      for (int a = 0; a < 3; ++a)
        if (dofs[a] >= 0) rhs[dofs[a]] += rule.weights[q] * fv * basis.value[a];
    }
  }
  return rhs;
}

std::vector<std::pair<Vec2, Vec2>> interface_normal_samples(const AssemblyContext& ctx) {
  std::vector<std::pair<Vec2, Vec2>> samples;
  for (const CutCell& cc : ctx.decomp.cuts) {
    if (cc.segment_length() <= 0.0) continue;
    const QuadratureRule rule = segment_quadrature(cc.seg_a, cc.seg_b);
    for (const Vec2& p : rule.points) samples.emplace_back(p, ctx.interface.normal(p));
  }
  return samples;
}

AssembledSystem assemble_unconstrained(const AssemblyContext& ctx, const Coefficients& coeffs,
                                       const ProblemConfig& config) {
  SparseSymmetric acc = assemble_bulk_stiffness(ctx, coeffs);
  acc.merge(assemble_interface_stiffness(ctx, coeffs));
  if (config.formulation == Formulation::Standard)
    acc.merge(assemble_standard_coupling(ctx, config.coupling));
  else
    acc.merge(assemble_robust_coupling(ctx, config.coupling, config.penalty, coeffs));
  acc.merge(assemble_ghost_penalty(ctx, coeffs, config.gamma, config.stab));

  AssembledSystem sys;
  sys.A = acc.compressed();
  sys.rhs = assemble_load(ctx, coeffs);
  sys.meta.formulation = config.formulation;
  sys.meta.h = ctx.mesh.h;
  sys.meta.beta = config.penalty.beta;
  sys.meta.gamma = config.gamma;
  sys.meta.block_count = ctx.spaces.count;
  sys.meta.block_offset = ctx.spaces.offset;
  return sys;
}

AssembledSystem assemble_system(const AssemblyContext& ctx, const Coefficients& coeffs,
                                const ProblemConfig& config, const DirichletSpec& dirichlet) {
  if (config.formulation == Formulation::Robust && config.strict_beta) {
    const BetaCheck check =
        check_beta_condition(coeffs.A1, coeffs.A2, interface_normal_samples(ctx),
                             config.penalty.beta);
    if (!check.ok)
      throw ConfigError("beta condition violated: beta must be at least " +
                        std::to_string(check.norm_sq));
  }
  return apply_dirichlet(assemble_unconstrained(ctx, coeffs, config), dirichlet, ctx.spaces);
}

} // namespace cutfrac
