#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "cutfrac/system.hpp"
#include "cutfrac/types.hpp"

namespace cutfrac {

// Accumulates triplets of a symmetric matrix. Callers insert full local
// blocks that are symmetric to the bit (symmetrize before inserting); the
// compressed form then satisfies A(i,j) == A(j,i) exactly.
class SparseSymmetric {
public:
  explicit SparseSymmetric(int n) : n_(n) {}
  int size() const { return n_; }
  void add(int i, int j, double v) { trips_.emplace_back(i, j, v); }
  void merge(const SparseSymmetric& other);
  SpMat compressed() const; // duplicates summed
  const std::vector<Eigen::Triplet<double>>& triplets() const { return trips_; }

private:
  int n_;
  std::vector<Eigen::Triplet<double>> trips_;
};

// Sparse Cholesky wrapper; construction fails on any nonpositive pivot,
// which doubles as the coercivity witness for assembled systems.
class DirectSolver {
public:
  explicit DirectSolver(const SpMat& A);
  Vector solve(const Vector& b) const;

private:
  Eigen::SimplicialLLT<SpMat> llt_;
};

// Direct solve with one step of iterative refinement; guarantees relative
// residual <= 1e-10 or reports a solver error.
Vector solve_direct(const SpMat& A, const Vector& b);

enum class Preconditioner { None, Diagonal };

struct CgResult {
  Vector x;
  int iterations = 0;
  double residual = 0.0; // relative
};

CgResult solve_cg(const SpMat& A, const Vector& b, double tol, int max_iters,
                  Preconditioner precond = Preconditioner::Diagonal);

struct ConditionEstimate {
  double kappa = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  int iters_max = 0;
  int iters_min = 0;
};

// lambda_max by power iteration, lambda_min by inverse iteration on the
// Cholesky factorization; relative-change tolerance 1e-6, 5000 iteration cap.
ConditionEstimate estimate_condition(const SpMat& A, double tol = 1e-6, int max_iters = 5000);

} // namespace cutfrac
