#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fsidd/fem.hpp"

namespace fsidd {

/// Sparse direct factors of a square operator, immutable once built.
class Factorization {
 public:
  enum class Kind {
    general,  // LU with partial pivoting (saddle-point systems)
    spd,      // Cholesky; fails on indefinite input
  };

  /// Throws std::runtime_error naming `name` when the operator is singular
  /// (or not positive definite for Kind::spd).
  Factorization(const SparseOperator& op, Kind kind, std::string name = "operator");

  DofVector solve(const DofVector& rhs) const;
  Eigen::Index size() const { return size_; }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  Kind kind_;
  std::string name_;
  Eigen::Index size_ = 0;
  std::unique_ptr<Eigen::SparseLU<SparseOperator, Eigen::COLAMDOrdering<int>>> lu_;
  std::unique_ptr<Eigen::SimplicialLLT<SparseOperator>> llt_;
};

std::shared_ptr<const Factorization> factorize(const SparseOperator& op, Factorization::Kind kind,
                                               std::string name = "operator");

struct KrylovReport {
  int iterations = 0;
  std::vector<double> residuals;  // relative residual norms, starting with 1 at k = 0
  bool converged = false;
};

using LinearMap = std::function<DofVector(const DofVector&)>;

struct GmresResult {
  DofVector x;
  KrylovReport report;
};

/// Full GMRES, zero initial guess, modified Gram-Schmidt with one
/// reorthogonalization pass. Stops when ||r_k|| <= tol * ||r_0||.
GmresResult gmres(const LinearMap& apply, const DofVector& rhs, double tol, int maxit);

}  // namespace fsidd
