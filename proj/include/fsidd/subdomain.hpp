#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "fsidd/fem.hpp"
#include "fsidd/linsolve.hpp"
#include "fsidd/timegrid.hpp"

namespace fsidd {

struct MaterialParams {
  double rho_f = 1.0;
  double nu_f = 1.0;
  double rho_s = 1.0;
  double nu_s = 1.0;
  double lambda = 1.0;
  double alpha_f = 0.0;
  double alpha_s = 0.0;

  /// Throws std::invalid_argument on nonpositive densities/moduli or negative
  /// Robin coefficients.
  void validate() const;
};

/// Lame parameters (nu_s, lambda) from Young's modulus and Poisson ratio.
std::pair<double, double> lame_from_young(double young, double poisson);

enum class InterfaceMode { neumann, robin };

/// Interface trace space of one subdomain: the interface dofs of a vector
/// space that are not Dirichlet-constrained. Trace vectors are
/// component-blocked over the active nodes in arclength order.
class TraceSpace {
 public:
  TraceSpace(const FeSpace& space, const EssentialConstraints& bc);

  int size() const { return static_cast<int>(global_.size()); }
  int num_nodes() const { return size() / 2; }
  /// Global space dof of each trace entry.
  const std::vector<int>& global_dofs() const { return global_; }
  const std::vector<Point>& nodes() const { return nodes_; }
  /// Full interface mass (u, v)_Γ over the space.
  const SparseOperator& gamma_mass() const { return gamma_mass_; }
  /// Trace mass matrix restricted to active dofs.
  const Eigen::MatrixXd& mass() const { return mass_; }

  /// L2(Γ) projection of the trace of u onto the active trace space.
  DofVector trace(const DofVector& u) const;
  /// Solve mass() * x = r.
  DofVector solve_mass(const DofVector& r) const { return mass_llt_.solve(r); }
  /// Space vector (g_h, v)_Γ for all v.
  DofVector load(const DofVector& g) const { return lift_ * g; }
  /// Extract the active rows of a space vector.
  DofVector rows(const DofVector& v) const;
  double norm2(const DofVector& g) const { return g.dot(mass_ * g); }

 private:
  std::vector<int> global_;
  std::vector<Point> nodes_;
  SparseOperator gamma_mass_;
  SparseOperator lift_;  // columns of gamma_mass_ at active dofs
  Eigen::MatrixXd mass_;
  Eigen::LLT<Eigen::MatrixXd> mass_llt_;
};

// ---------------------------------------------------------------------------
// Fluid

struct FluidSetup {
  std::shared_ptr<const FeSpace> velocity;
  std::shared_ptr<const FeSpace> pressure;
  std::vector<BoundaryTag> dirichlet_tags;
  std::vector<int> pinned_vertices;  // extra no-slip vertices (clamped interface ends)
};

struct FluidForms {
  SparseOperator mass;       // rho_f (u, v)
  SparseOperator stiffness;  // 2 nu_f (D(u), D(v))
  SparseOperator div;        // -(q, div u); rows pressure, columns velocity
  SparseOperator gamma_mass; // (u, v)_Γ
};

FluidForms assemble_fluid_forms(const FluidSetup& setup, const MaterialParams& params);

struct FluidSource {
  VectorField forcing;                                 // f_f(x, t)
  VectorField dirichlet;                               // velocity on Dirichlet dofs
  std::vector<std::pair<BoundaryTag, VectorField>> tractions;  // sigma_f n on Neumann sides
  VectorField initial;                                 // u(x, 0)
};

/// Per-slab loads and Dirichlet values of a source on one time grid.
struct FluidLoads {
  std::vector<DofVector> load;       // (f, v) + boundary tractions at t^m
  std::vector<DofVector> dirichlet;  // velocity values (full vector) at t^m
  DofVector u0;
};

FluidLoads build_fluid_loads(const FluidSetup& setup, const FluidSource& source, const TimeGrid& grid);

struct FluidState {
  DofVector u;
  DofVector p;
  DofVector trace_u;       // L2(Γ)-projected velocity trace
  DofVector trace_stress;  // recovered sigma_f n_f
};

struct FluidHistory {
  std::shared_ptr<const TimeGrid> grid;
  DofVector u0;
  std::vector<DofVector> u;  // slab m at index m-1
  std::vector<DofVector> p;
};

struct FluidSweep {
  TraceSeries trace_u;
  TraceSeries trace_stress;
  FluidState last;
  std::optional<FluidHistory> history;
};

/// Backward Euler on a fixed time grid. The slab matrices
/// [rho/dt M + A + alpha M_Γ, B^T; B, 0] are factorized once per distinct step.
class FluidSolver {
 public:
  FluidSolver(FluidSetup setup, std::shared_ptr<const FluidForms> forms, InterfaceMode mode, double alpha,
              std::shared_ptr<const TimeGrid> grid);

  const FluidSetup& setup() const { return setup_; }
  const FluidForms& forms() const { return *forms_; }
  const TraceSpace& trace_space() const { return *trace_; }
  const TimeGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TimeGrid>& grid_ptr() const { return grid_; }
  const EssentialConstraints& constraints() const { return bc_; }
  InterfaceMode mode() const { return mode_; }
  double alpha() const { return alpha_; }
  int num_velocity() const { return nv_; }
  int num_pressure() const { return nq_; }

  /// One slab. `load`/`dirichlet` may be empty (zero); g is the slab value of
  /// the interface data (empty means zero).
  FluidState step(int m, const DofVector& u_prev, const DofVector& load, const DofVector& dirichlet,
                  const DofVector& g) const;

  /// `data` on grid() or null (zero); `loads` null means zero forcing,
  /// boundary values and initial state.
  using Observer = std::function<void(int m, const FluidState&)>;
  FluidSweep sweep(const TraceSeries* data, const FluidLoads* loads, bool keep_history = false,
                   const Observer& observer = {}) const;

 private:
  FluidSetup setup_;
  std::shared_ptr<const FluidForms> forms_;
  InterfaceMode mode_;
  double alpha_;
  std::shared_ptr<const TimeGrid> grid_;
  int nv_ = 0, nq_ = 0;
  EssentialConstraints bc_;
  std::shared_ptr<const TraceSpace> trace_;
  SparseOperator rows_mass_, rows_stiff_, rows_divt_;  // active-trace rows
  std::vector<double> dt_;              // per slab, equal steps snapped to one value
  std::vector<int> slab_factor_;        // per slab index into factors_
  std::vector<std::shared_ptr<const Factorization>> factors_;
  std::vector<EssentialConstraints> slab_bc_;  // one per factorization
};

// ---------------------------------------------------------------------------
// Structure

struct StructureSetup {
  std::shared_ptr<const FeSpace> displacement;
  std::vector<BoundaryTag> dirichlet_tags;
};

struct StructureForms {
  SparseOperator mass;        // rho_s (eta, xi)
  SparseOperator stiffness;   // 2 nu_s (D, D) + lambda (div, div)
  SparseOperator gamma_mass;
};

StructureForms assemble_structure_forms(const StructureSetup& setup, const MaterialParams& params);

struct StructureSource {
  VectorField forcing;
  VectorField dirichlet;  // displacement values on Dirichlet dofs
  VectorField initial_displacement;
  VectorField initial_velocity;
};

struct StructureLoads {
  std::vector<DofVector> load;
  std::vector<DofVector> dirichlet;  // displacement values at t^n
  DofVector eta0;
  DofVector eta_dot0;
};

StructureLoads build_structure_loads(const StructureSetup& setup, const StructureSource& source,
                                     const TimeGrid& grid);

struct StructureState {
  DofVector eta;
  DofVector eta_dot;
  DofVector trace_velocity;  // L2(Γ)-projected eta_dot trace
  DofVector trace_stress;    // recovered sigma_s n_s
};

struct StructureHistory {
  std::shared_ptr<const TimeGrid> grid;
  DofVector eta0;
  DofVector eta_dot0;
  std::vector<DofVector> eta;
  std::vector<DofVector> eta_dot;
};

struct StructureSweep {
  TraceSeries trace_velocity;
  TraceSeries trace_stress;
  StructureState last;
  std::optional<StructureHistory> history;
};

/// Backward Euler in (eta, eta_dot) with eta^n = eta^{n-1} + dt eta_dot^n
/// substituted, leaving the SPD system rho/dt M + dt A + alpha M_Γ in eta_dot.
/// Neumann data is sigma_s n_s; Robin data is -alpha_s eta_dot - sigma_s n_s.
class StructureSolver {
 public:
  StructureSolver(StructureSetup setup, std::shared_ptr<const StructureForms> forms, InterfaceMode mode,
                  double alpha, std::shared_ptr<const TimeGrid> grid);

  const StructureSetup& setup() const { return setup_; }
  const StructureForms& forms() const { return *forms_; }
  const TraceSpace& trace_space() const { return *trace_; }
  const TimeGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TimeGrid>& grid_ptr() const { return grid_; }
  const EssentialConstraints& constraints() const { return bc_; }
  InterfaceMode mode() const { return mode_; }
  double alpha() const { return alpha_; }

  /// One slab; empty vectors mean zero. Dirichlet dofs of eta_prev must hold
  /// the previous boundary values.
  StructureState step(int n, const DofVector& eta_prev, const DofVector& eta_dot_prev, const DofVector& load,
                      const DofVector& dirichlet, const DofVector& g) const;

  using Observer = std::function<void(int n, const StructureState&)>;
  StructureSweep sweep(const TraceSeries* data, const StructureLoads* loads, bool keep_history = false,
                       const Observer& observer = {}) const;

 private:
  StructureSetup setup_;
  std::shared_ptr<const StructureForms> forms_;
  InterfaceMode mode_;
  double alpha_;
  std::shared_ptr<const TimeGrid> grid_;
  EssentialConstraints bc_;
  std::shared_ptr<const TraceSpace> trace_;
  SparseOperator rows_mass_, rows_stiff_;
  std::vector<double> dt_;              // per slab, equal steps snapped to one value
  std::vector<int> slab_factor_;        // per slab index into factors_
  std::vector<std::shared_ptr<const Factorization>> factors_;
  std::vector<EssentialConstraints> slab_bc_;  // one per factorization
};

}  // namespace fsidd
