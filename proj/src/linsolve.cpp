#include "fsidd/linsolve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace fsidd {

Factorization::Factorization(const SparseOperator& op, Kind kind, std::string name)
    : kind_(kind), name_(std::move(name)), size_(op.rows()) {
  if (op.rows() != op.cols()) throw std::invalid_argument("factorize: " + name_ + " is not square");
  SparseOperator a = op;
  a.makeCompressed();
  if (kind_ == Kind::general) {
    lu_ = std::make_unique<Eigen::SparseLU<SparseOperator, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(a);
    lu_->factorize(a);
    if (lu_->info() != Eigen::Success) {
      throw std::runtime_error("factorize: " + name_ + " is singular (" + lu_->lastErrorMessage() + ")");
    }
  } else {
    llt_ = std::make_unique<Eigen::SimplicialLLT<SparseOperator>>();
    llt_->compute(a);
    if (llt_->info() != Eigen::Success) {
      throw std::runtime_error("factorize: " + name_ + " is not symmetric positive definite");
    }
  }
}

DofVector Factorization::solve(const DofVector& rhs) const {
  if (rhs.size() != size_) throw std::invalid_argument("Factorization::solve: rhs size mismatch for " + name_);
  if (lu_) return lu_->solve(rhs);
  return llt_->solve(rhs);
}

std::shared_ptr<const Factorization> factorize(const SparseOperator& op, Factorization::Kind kind, std::string name) {
  return std::make_shared<const Factorization>(op, kind, std::move(name));
}

GmresResult gmres(const LinearMap& apply, const DofVector& rhs, double tol, int maxit) {
  const Eigen::Index n = rhs.size();
  GmresResult out{DofVector::Zero(n), {}};
  out.report.residuals.push_back(1.0);
  if (!rhs.allFinite()) throw std::invalid_argument("gmres: non-finite right-hand side");
  const double beta = rhs.norm();
  if (beta == 0.0) {
    out.report.converged = true;
    return out;
  }

  std::vector<DofVector> v;
  v.push_back(rhs / beta);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(maxit + 1, maxit);
  Eigen::VectorXd cs = Eigen::VectorXd::Zero(maxit), sn = Eigen::VectorXd::Zero(maxit);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(maxit + 1);
  g(0) = beta;

  int k = 0;
  while (k < maxit) {
    DofVector w = apply(v[k]);
    if (w.size() != n) throw std::invalid_argument("gmres: operator changed the vector length");
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= k; ++i) {
        const double hij = v[i].dot(w);
        h(i, k) += hij;
        w -= hij * v[i];
      }
    }
    h(k + 1, k) = w.norm();

    for (int i = 0; i < k; ++i) {
      const double t = cs(i) * h(i, k) + sn(i) * h(i + 1, k);
      h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
      h(i, k) = t;
    }
    const double r = std::hypot(h(k, k), h(k + 1, k));
    const double subdiag = h(k + 1, k);
    cs(k) = (r == 0.0) ? 1.0 : h(k, k) / r;
    sn(k) = (r == 0.0) ? 0.0 : subdiag / r;
    h(k, k) = r;
    h(k + 1, k) = 0.0;
    g(k + 1) = -sn(k) * g(k);
    g(k) = cs(k) * g(k);
    ++k;

    const double rel = std::abs(g(k)) / beta;
    out.report.residuals.push_back(rel);
    if (rel <= tol) {
      out.report.converged = true;
      break;
    }
    const double hnorm = h.col(k - 1).head(k).norm();
    if (subdiag <= 1e-14 * hnorm) break;  // invariant subspace found
    v.push_back(w / subdiag);
  }

  const Eigen::VectorXd y =
      h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
  for (int i = 0; i < k; ++i) out.x += y(i) * v[i];
  out.report.iterations = k;
  if (!out.report.converged) out.report.converged = out.report.residuals.back() <= tol;
  return out;
}

}  // namespace fsidd
