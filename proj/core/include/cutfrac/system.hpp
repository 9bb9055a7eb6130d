#pragma once

#include <Eigen/SparseCore>
#include <array>

#include "cutfrac/types.hpp"

namespace cutfrac {

using SpMat = Eigen::SparseMatrix<double>;

enum class Formulation { Standard, Robust };

struct SystemMeta {
  Formulation formulation = Formulation::Robust;
  double h = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::array<int, 3> block_count{0, 0, 0}; // n1, n2, nGamma
  std::array<int, 3> block_offset{0, 0, 0};
};

struct AssembledSystem {
  SpMat A;
  Vector rhs;
  SystemMeta meta;
  int size() const { return static_cast<int>(A.rows()); }
};

} // namespace cutfrac
