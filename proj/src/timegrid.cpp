#include "fsidd/timegrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsidd {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("TimeGrid: need at least one slab");
  if (points_.front() != 0.0) throw std::invalid_argument("TimeGrid: first point must be 0");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) throw std::invalid_argument("TimeGrid: points must increase strictly");
  }
}

TimeGrid make_uniform_grid(double T, int M) {
  if (!(T > 0.0) || M < 1) {
    std::ostringstream msg;
    msg << "make_uniform_grid: need T > 0 and M >= 1 (T=" << T << ", M=" << M << ")";
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> p(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m < M; ++m) p[m] = T * m / M;
  p[M] = T;
  return TimeGrid(std::move(p));
}

int slab_count(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("slab_count: T and dt must be positive");
  const double ratio = T / dt;
  const double m = std::round(ratio);
  if (m < 1.0 || std::abs(ratio - m) > 1e-9 * ratio) {
    std::ostringstream msg;
    msg << "slab_count: dt=" << dt << " does not divide T=" << T;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(m);
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

TraceSeries::TraceSeries(std::shared_ptr<const TimeGrid> grid, int ndof)
    : grid_(std::move(grid)), values_(Eigen::MatrixXd::Zero(ndof, grid_->num_slabs())) {}

TraceSeries::TraceSeries(std::shared_ptr<const TimeGrid> grid, Eigen::MatrixXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.cols() != grid_->num_slabs()) throw std::invalid_argument("TraceSeries: slab count mismatch");
}

Eigen::VectorXd TraceSeries::integral() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(ndof());
  for (int m = 1; m <= num_slabs(); ++m) s += grid_->dt(m) * values_.col(m - 1);
  return s;
}

double TraceSeries::l2_norm(const Eigen::MatrixXd* weight) const {
  double s = 0.0;
  for (int m = 1; m <= num_slabs(); ++m) {
    const auto v = values_.col(m - 1);
    s += grid_->dt(m) * (weight ? v.dot(*weight * v) : v.squaredNorm());
  }
  return std::sqrt(s);
}

namespace {

// Calls f(i, j, w) for every target slab i and source slab j that overlap,
// with w = |J_i ∩ J_j| / |J_i|.
template <class F>
void for_each_overlap(const TimeGrid& source, const TimeGrid& target, F&& f) {
  const double ts = source.final_time(), tt = target.final_time();
  if (std::abs(ts - tt) > 1e-12 * std::max(ts, tt)) {
    std::ostringstream msg;
    msg << "project: grids cover different intervals (T=" << ts << " vs " << tt << ")";
    throw std::invalid_argument(msg.str());
  }
  const int ms = source.num_slabs(), mt = target.num_slabs();
  // Both point lists are sorted, so one merge pass visits every nonempty overlap.
  int i = 1, j = 1;
  while (i <= mt && j <= ms) {
    const double ov = overlap(target.t(i - 1), target.t(i), source.t(j - 1), source.t(j));
    if (ov > 0.0) f(i, j, ov / target.dt(i));
    if (target.t(i) < source.t(j)) ++i;
    else if (source.t(j) < target.t(i)) ++j;
    else {
      ++i;
      ++j;
    }
  }
}

}  // namespace

Eigen::MatrixXd projection_matrix(const TimeGrid& source, const TimeGrid& target) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(target.num_slabs(), source.num_slabs());
  if (source.same_as(target)) return Eigen::MatrixXd::Identity(target.num_slabs(), source.num_slabs());
  for_each_overlap(source, target, [&p](int i, int j, double w) { p(i - 1, j - 1) = w; });
  return p;
}

TraceSeries project(const TraceSeries& series, std::shared_ptr<const TimeGrid> target) {
  if (series.grid().same_as(*target)) return TraceSeries(std::move(target), series.values());
  TraceSeries out(target, series.ndof());
  for_each_overlap(series.grid(), *target,
                   [&](int i, int j, double w) { out.values().col(i - 1) += w * series.values().col(j - 1); });
  return out;
}

}  // namespace fsidd
