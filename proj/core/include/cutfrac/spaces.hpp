#pragma once

#include <array>
#include <vector>

#include "cutfrac/geometry.hpp"
#include "cutfrac/mesh.hpp"
#include "cutfrac/system.hpp"

namespace cutfrac {

inline constexpr int kField1 = 0;
inline constexpr int kField2 = 1;
inline constexpr int kFieldGamma = 2;

// Active meshes: T1/T2 hold every element meeting the respective subdomain,
// TGamma the cut elements; F1/F2/FGamma are the ghost-penalty face sets.
struct ActiveDecomposition {
  std::vector<ElementSide> side;           // per background element
  std::vector<int> elems1, elems2, elemsG; // ascending element ids
  std::vector<CutCell> cuts;               // aligned with elemsG
  std::vector<int> cut_of_elem;            // element -> index into cuts, -1 if uncut
  std::vector<int> faces1, faces2, facesG; // face ids into mesh.faces

  bool active(int field, int elem) const {
    const ElementSide s = side[elem];
    if (field == kField1) return s != ElementSide::Inside2;
    if (field == kField2) return s != ElementSide::Inside1;
    return s == ElementSide::Cut;
  }
  const CutCell* cut(int elem) const {
    const int k = cut_of_elem[elem];
    return k < 0 ? nullptr : &cuts[k];
  }
};

ActiveDecomposition build_active_meshes(const BackgroundMesh& mesh, const Interface& gamma);

// Three restricted P1 spaces, block-ordered (field 1, field 2, Gamma).
struct SpaceSet {
  std::array<std::vector<int>, 3> dof_of_node; // -1 where inactive
  std::array<std::vector<int>, 3> active_nodes;
  std::array<int, 3> count{0, 0, 0};
  std::array<int, 3> offset{0, 0, 0};
  int total = 0;

  int dof(int field, int node) const {
    const int d = dof_of_node[field][node];
    return d < 0 ? -1 : offset[field] + d;
  }
};

SpaceSet build_spaces(const ActiveDecomposition& decomp, const BackgroundMesh& mesh);

struct P1Basis {
  std::array<double, 3> value;
  std::array<Vec2, 3> grad;
};

P1Basis eval_basis(const BackgroundMesh& mesh, int element, const Vec2& p);

struct DirichletSpec {
  struct Entry {
    int field;
    int node;
    double value;
  };
  std::vector<Entry> entries;
};

AssembledSystem apply_dirichlet(const AssembledSystem& system, const DirichletSpec& spec,
                                const SpaceSet& spaces);

} // namespace cutfrac
