#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace fsidd {

/// Partition 0 = t^0 < t^1 < ... < t^M = T; slab m (1-based) is (t^{m-1}, t^m].
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);

  int num_slabs() const { return static_cast<int>(points_.size()) - 1; }
  double final_time() const { return points_.back(); }
  double t(int m) const { return points_[m]; }
  /// Width of slab m, 1 <= m <= M.
  double dt(int m) const { return points_[m] - points_[m - 1]; }
  const std::vector<double>& points() const { return points_; }
  bool same_as(const TimeGrid& other) const { return points_ == other.points_; }

 private:
  std::vector<double> points_;
};

TimeGrid make_uniform_grid(double T, int M);

/// Number of uniform slabs of width `dt` covering (0, T]; throws unless dt
/// divides T to within 1e-9 relative.
int slab_count(double T, double dt);

/// |(a0, a1] ∩ (b0, b1]|.
double overlap(double a0, double a1, double b0, double b1);

/// Piecewise constant in time, valued in a fixed trace space: column m-1 of
/// values() holds the (constant) value on slab m.
class TraceSeries {
 public:
  TraceSeries() = default;
  TraceSeries(std::shared_ptr<const TimeGrid> grid, int ndof);
  TraceSeries(std::shared_ptr<const TimeGrid> grid, Eigen::MatrixXd values);

  const TimeGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TimeGrid>& grid_ptr() const { return grid_; }
  int ndof() const { return static_cast<int>(values_.rows()); }
  int num_slabs() const { return static_cast<int>(values_.cols()); }

  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }
  /// Value on slab m (1-based).
  auto slab(int m) { return values_.col(m - 1); }
  auto slab(int m) const { return values_.col(m - 1); }

  /// ∫_0^T φ dt, per dof.
  Eigen::VectorXd integral() const;
  /// sqrt(Σ_m Δt^m φ_m^T W φ_m); W defaults to the identity.
  double l2_norm(const Eigen::MatrixXd* weight = nullptr) const;

 private:
  std::shared_ptr<const TimeGrid> grid_;
  Eigen::MatrixXd values_;
};

/// Overlap-weighted slab averages on `target`: the L2(0,T) projection onto
/// piecewise constants on `target`.
TraceSeries project(const TraceSeries& series, std::shared_ptr<const TimeGrid> target);

/// The projection as an (M_target x M_source) matrix acting on slab values.
Eigen::MatrixXd projection_matrix(const TimeGrid& source, const TimeGrid& target);

}  // namespace fsidd
