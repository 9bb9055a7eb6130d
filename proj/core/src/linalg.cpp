#include "cutfrac/linalg.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cutfrac/errors.hpp"

namespace cutfrac {

void SparseSymmetric::merge(const SparseSymmetric& other) {
  trips_.insert(trips_.end(), other.trips_.begin(), other.trips_.end());
}

SpMat SparseSymmetric::compressed() const {
  SpMat A(n_, n_);
  A.setFromTriplets(trips_.begin(), trips_.end());
  return A;
}

DirectSolver::DirectSolver(const SpMat& A) {
  llt_.compute(A);
  if (llt_.info() != Eigen::Success)
    throw SolverError("direct solver: matrix is not positive definite (nonpositive pivot)");
}

Vector DirectSolver::solve(const Vector& b) const { return llt_.solve(b); }

Vector solve_direct(const SpMat& A, const Vector& b) {
  const DirectSolver solver(A);
  Vector x = solver.solve(b);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(b.size());
  double res = (A * x - b).norm() / bnorm;
  if (res > 1e-10) {
    x += solver.solve(b - A * x); // one refinement step
    res = (A * x - b).norm() / bnorm;
    if (res > 1e-10) {
      std::ostringstream msg;
      msg << "direct solver: relative residual " << res << " exceeds 1e-10 after refinement";
      throw SolverError(msg.str());
    }
  }
  return x;
}

CgResult solve_cg(const SpMat& A, const Vector& b, double tol, int max_iters,
                  Preconditioner precond) {
  if (tol <= 0.0) throw ConfigError("cg: tolerance must be positive");
  const int n = static_cast<int>(A.rows());
  CgResult out;
  out.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return out;

  Vector invdiag = Vector::Ones(n);
  if (precond == Preconditioner::Diagonal) {
    const Vector d = A.diagonal();
    for (int i = 0; i < n; ++i) {
      if (d[i] <= 0.0) throw SolverError("cg: nonpositive diagonal entry, matrix not SPD");
      invdiag[i] = 1.0 / d[i];
    }
  }

  Vector r = b;
  Vector z = invdiag.asDiagonal() * r;
  Vector p = z;
  double rz = r.dot(z);
  std::vector<double> history;
  for (int it = 1; it <= max_iters; ++it) {
    const Vector Ap = A * p;
    const double pAp = p.dot(Ap);
    if (pAp <= 0.0) throw SolverError("cg: nonpositive curvature, matrix not SPD");
    const double alpha = rz / pAp;
    out.x += alpha * p;
    r -= alpha * Ap;
    out.residual = r.norm() / bnorm;
    history.push_back(out.residual);
    out.iterations = it;
    if (out.residual <= tol) return out;
    z = invdiag.asDiagonal() * r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  std::ostringstream msg;
  msg << "cg: no convergence in " << max_iters << " iterations, residual history (last 5):";
  for (size_t k = history.size() > 5 ? history.size() - 5 : 0; k < history.size(); ++k)
    msg << " " << history[k];
  throw ConvergenceError(msg.str());
}

namespace {

// Rayleigh-quotient iteration loop shared by the two extreme-eigenvalue
// estimates; `apply` maps x to A x or A^{-1} x.
template <typename Apply>
std::pair<double, int> rayleigh_iterate(const SpMat& A, const Apply& apply, int n, double tol,
                                        int max_iters, unsigned seed, const char* what) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = unif(rng);
  x.normalize();
  double lambda = x.dot(A * x);
  for (int it = 1; it <= max_iters; ++it) {
    x = apply(x);
    x.normalize();
    const double next = x.dot(A * x);
    const double change = std::abs(next - lambda) / std::max(std::abs(next), 1e-300);
    lambda = next;
    if (change < tol) return {lambda, it};
  }
  std::ostringstream msg;
  msg << "condition estimate: " << what << " did not converge in " << max_iters
      << " iterations (partial estimate " << lambda << ")";
  throw SolverError(msg.str());
}

} // namespace

ConditionEstimate estimate_condition(const SpMat& A, double tol, int max_iters) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) throw ConfigError("condition estimate: empty matrix");
  ConditionEstimate est;
  if (n == 1) {
    est.lambda_max = est.lambda_min = A.coeff(0, 0);
    est.kappa = 1.0;
    est.iters_max = est.iters_min = 0;
    return est;
  }

  auto [lmax, itmax] = rayleigh_iterate(
      A, [&A](const Vector& x) { return Vector(A * x); }, n, tol, max_iters, 3u,
      "power iteration");
  est.lambda_max = lmax;
  est.iters_max = itmax;

  const DirectSolver solver(A);
  auto [lmin, itmin] = rayleigh_iterate(
      A, [&solver](const Vector& x) { return solver.solve(x); }, n, tol, max_iters, 7u,
      "inverse iteration");
  est.lambda_min = lmin;
  est.iters_min = itmin;

  if (est.lambda_min <= 0.0)
    throw SolverError("condition estimate: nonpositive smallest eigenvalue estimate");
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

} // namespace cutfrac
