#include <algorithm>
#include <stdexcept>
#include <string>

#include "fsidd/fem.hpp"

namespace fsidd {

EssentialConstraints::EssentialConstraints(int size, std::vector<int> dofs)
    : dofs_(std::move(dofs)), mask_(static_cast<std::size_t>(size), 0) {
  std::sort(dofs_.begin(), dofs_.end());
  dofs_.erase(std::unique(dofs_.begin(), dofs_.end()), dofs_.end());
  for (int d : dofs_) {
    if (d < 0 || d >= size) throw std::out_of_range("EssentialConstraints: dof " + std::to_string(d) + " out of range");
    mask_[d] = 1;
  }
}

SparseOperator EssentialConstraints::eliminate(const SparseOperator& op) {
  if (op.rows() != size() || op.cols() != size()) {
    throw std::invalid_argument("EssentialConstraints::eliminate: operator size does not match");
  }
  std::vector<int> column_slot(mask_.size(), -1);
  for (std::size_t k = 0; k < dofs_.size(); ++k) column_slot[dofs_[k]] = static_cast<int>(k);

  std::vector<Eigen::Triplet<double>> kept, coupled;
  kept.reserve(static_cast<std::size_t>(op.nonZeros()));
  for (int col = 0; col < op.outerSize(); ++col) {
    for (SparseOperator::InnerIterator it(op, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (mask_[row]) continue;
      if (mask_[col]) {
        coupled.emplace_back(row, column_slot[col], it.value());
      } else {
        kept.emplace_back(row, col, it.value());
      }
    }
  }
  for (int d : dofs_) kept.emplace_back(d, d, 1.0);

  coupling_.resize(size(), static_cast<Eigen::Index>(dofs_.size()));
  coupling_.setFromTriplets(coupled.begin(), coupled.end());
  SparseOperator out(size(), size());
  out.setFromTriplets(kept.begin(), kept.end());
  return out;
}

void EssentialConstraints::lift(DofVector& rhs, const DofVector& values) const {
  if (rhs.size() != size() || values.size() != size()) {
    throw std::invalid_argument("EssentialConstraints::lift: vector size does not match");
  }
  if (coupling_.rows() != size()) throw std::logic_error("EssentialConstraints::lift: eliminate() not called");
  DofVector vc(static_cast<Eigen::Index>(dofs_.size()));
  for (std::size_t k = 0; k < dofs_.size(); ++k) vc(static_cast<Eigen::Index>(k)) = values(dofs_[k]);
  rhs -= coupling_ * vc;
  for (int d : dofs_) rhs(d) = values(d);
}

void EssentialConstraints::zero(DofVector& rhs) const {
  for (int d : dofs_) rhs(d) = 0.0;
}

Constrained apply_essential_bc(const SparseOperator& op, const DofVector& rhs, const std::vector<int>& dofs,
                               const DofVector& values) {
  EssentialConstraints bc(static_cast<int>(op.rows()), dofs);
  Constrained out{bc.eliminate(op), rhs};
  bc.lift(out.rhs, values);
  return out;
}

std::vector<int> dirichlet_dofs(const FeSpace& space, std::span<const BoundaryTag> tags,
                                std::span<const int> pinned_vertices) {
  std::vector<int> scalar;
  for (BoundaryTag tag : tags) {
    const auto d = space.boundary_scalar_dofs(tag);
    scalar.insert(scalar.end(), d.begin(), d.end());
  }
  scalar.insert(scalar.end(), pinned_vertices.begin(), pinned_vertices.end());
  std::sort(scalar.begin(), scalar.end());
  scalar.erase(std::unique(scalar.begin(), scalar.end()), scalar.end());
  std::vector<int> out;
  out.reserve(scalar.size() * space.vdim());
  for (int c = 0; c < space.vdim(); ++c) {
    for (int s : scalar) out.push_back(space.dof(c, s));
  }
  return out;
}

}  // namespace fsidd
