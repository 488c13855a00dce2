#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fsidd/linsolve.hpp"
#include "fsidd/subdomain.hpp"
#include "fsidd/timegrid.hpp"

namespace fsidd {

enum class Method { sp, robin_gmres, robin_swr };

const char* to_string(Method method);
/// Accepts "sp", "robin_gmres", "robin_swr"; throws std::invalid_argument.
Method parse_method(const std::string& name);

/// Everything that defines one coupled run: spaces, boundary conditions,
/// the two time grids and the true forcing/boundary/initial data.
struct CoupledProblem {
  MaterialParams params;
  FluidSetup fluid;
  StructureSetup structure;
  std::shared_ptr<const TimeGrid> grid_f;
  std::shared_ptr<const TimeGrid> grid_s;
  FluidSource fluid_source;
  StructureSource structure_source;
};

struct SubdomainForms {
  std::shared_ptr<const FluidForms> fluid;
  std::shared_ptr<const StructureForms> structure;
};

SubdomainForms assemble_forms(const CoupledProblem& problem);

struct CoupledSolution {
  FluidSweep fluid;
  StructureSweep structure;
};

struct SweepObservers {
  FluidSolver::Observer fluid;
  StructureSolver::Observer structure;
};

/// Slab-major, dof-minor flattening of a series.
DofVector flatten(const TraceSeries& series);
TraceSeries unflatten(const DofVector& z, std::shared_ptr<const TimeGrid> grid, int ndof, Eigen::Index offset = 0);

/// Common part of both formulations: one solver per subdomain, the true loads
/// and the check that both sides expose the same interface nodes.
class CoupledSweeps {
 public:
  CoupledSweeps(const CoupledProblem& problem, const SubdomainForms& forms, InterfaceMode mode);

  const FluidSolver& fluid() const { return fluid_; }
  const StructureSolver& structure() const { return structure_; }
  const FluidLoads& fluid_loads() const { return fluid_loads_; }
  const StructureLoads& structure_loads() const { return structure_loads_; }
  const std::shared_ptr<const TimeGrid>& grid_f() const { return fluid_.grid_ptr(); }
  const std::shared_ptr<const TimeGrid>& grid_s() const { return structure_.grid_ptr(); }
  int trace_size() const { return fluid_.trace_space().size(); }
  const MaterialParams& params() const { return params_; }

  CoupledSolution run(const TraceSeries* data_f, const TraceSeries* data_s, bool keep_history = false,
                      const SweepObservers& observers = {}) const;
  /// Fluid and structure sweeps run concurrently; without loads the forcing
  /// and initial data are zero.
  CoupledSolution sweep_both(const TraceSeries* data_f, const TraceSeries* data_s, bool with_loads,
                             bool keep_history = false, const SweepObservers& observers = {}) const;

 private:
  MaterialParams params_;
  FluidSolver fluid_;
  StructureSolver structure_;
  FluidLoads fluid_loads_;
  StructureLoads structure_loads_;
};

/// Steklov-Poincare interface problem for the common normal stress
/// g = sigma_f n_f = -sigma_s n_s, posed on the fluid grid:
///   S g = u(g)|_Γ - Π_fs eta_dot(-Π_sf g)|_Γ,  rhs = -(u(0, data)|_Γ - Π_fs eta_dot(0, data)|_Γ).
class SpInterface {
 public:
  SpInterface(const CoupledProblem& problem, const SubdomainForms& forms);

  int size() const;
  DofVector apply(const DofVector& g) const;
  DofVector rhs() const;
  CoupledSolution finalize(const DofVector& g, bool keep_history = false, const SweepObservers& observers = {}) const;
  const CoupledSweeps& sweeps() const { return sweeps_; }

 private:
  CoupledSweeps sweeps_;
};

/// Two-sided Robin interface problem in (g_f on the fluid grid, g_s on the
/// structure grid), flattened with g_f first:
///   S_R z = [g_f - Π_fs(g_s + (α_f+α_s) eta_dot(g_s)|_Γ); g_s - Π_sf(g_f - (α_f+α_s) u(g_f)|_Γ)]
///   χ_R   = [(α_f+α_s) Π_fs eta_dot(0, data)|_Γ; -(α_f+α_s) Π_sf u(0, data)|_Γ]
class RobinInterface {
 public:
  RobinInterface(const CoupledProblem& problem, const SubdomainForms& forms);

  int size() const;
  int size_f() const;
  DofVector apply(const DofVector& z) const;
  DofVector rhs() const;
  CoupledSolution finalize(const DofVector& z, bool keep_history = false, const SweepObservers& observers = {}) const;
  const CoupledSweeps& sweeps() const { return sweeps_; }

  TraceSeries data_f(const DofVector& z) const;
  TraceSeries data_s(const DofVector& z) const;
  DofVector join(const TraceSeries& g_f, const TraceSeries& g_s) const;

 private:
  CoupledSweeps sweeps_;
  double alpha_sum_;
};

struct SwrReport {
  std::vector<double> updates;  // relative l2 change of the interface data, one per iteration
  std::vector<double> energy;   // B^k from iteration 2 on (differences of consecutive iterates)
  int iterations = 0;
  bool converged = false;
};

struct SwrResult {
  DofVector z;
  SwrReport report;
};

/// Jacobi Schwarz waveform relaxation on the Robin data; stops when
/// ||z^k - z^{k-1}|| <= tol ||z^k||.
SwrResult swr_solve(const RobinInterface& robin, double tol, int maxit, const DofVector* initial = nullptr);

/// 1/(2(α_f+α_s)) [∫ ||d_f||²_Γ dt + ∫ ||d_s||²_Γ dt] with d_f on the fluid
/// grid, d_s on the structure grid.
double interface_energy(const CoupledSweeps& sweeps, const TraceSeries& d_f, const TraceSeries& d_s);

struct InterfaceSolve {
  Method method = Method::sp;
  DofVector z;
  KrylovReport krylov;  // sp and robin_gmres
  SwrReport swr;        // robin_swr
  int iterations = 0;
  bool converged = false;
};

/// GMRES on S g = rhs for SP.
InterfaceSolve solve_interface(const SpInterface& sp, double tol, int maxit);
/// GMRES or SWR on the Robin problem, per `method`.
InterfaceSolve solve_interface(const RobinInterface& robin, Method method, double tol, int maxit);

/// ½||u - eta_dot||²_Γ at the final time. `projected` compares the last fluid
/// slab with the structure trace projected onto the fluid grid; otherwise
/// the last slab values of both sides are compared directly.
double interface_velocity_error(const CoupledSweeps& sweeps, const CoupledSolution& solution, bool projected);

}  // namespace fsidd
