#include "fsidd/subdomain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsidd {

namespace {

SparseOperator select_columns(const SparseOperator& a, const std::vector<int>& cols) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (SparseOperator::InnerIterator it(a, cols[k]); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(k), it.value());
    }
  }
  SparseOperator out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Rows `rows` of a symmetric operator.
SparseOperator select_rows_symmetric(const SparseOperator& a, const std::vector<int>& rows) {
  return SparseOperator(select_columns(a, rows).transpose());
}

// Group slabs of (nearly) equal width so each group shares one factorization.
void group_steps(const TimeGrid& grid, std::vector<double>& dt, std::vector<int>& slab_group,
                 std::vector<double>& group_dt) {
  dt.clear();
  slab_group.clear();
  group_dt.clear();
  for (int m = 1; m <= grid.num_slabs(); ++m) {
    const double d = grid.dt(m);
    int found = -1;
    for (std::size_t k = 0; k < group_dt.size(); ++k) {
      if (std::abs(group_dt[k] - d) <= 1e-10 * d) {
        found = static_cast<int>(k);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(group_dt.size());
      group_dt.push_back(d);
    }
    slab_group.push_back(found);
    dt.push_back(group_dt[found]);
  }
}

void check_data(const TraceSeries* data, const TimeGrid& grid, int ndof, const char* who) {
  if (!data) return;
  if (!data->grid().same_as(grid)) {
    throw std::invalid_argument(std::string(who) + ": interface data lives on a different time grid");
  }
  if (data->ndof() != ndof) {
    std::ostringstream msg;
    msg << who << ": interface data has " << data->ndof() << " trace dofs, expected " << ndof;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

void MaterialParams::validate() const {
  if (!(rho_f > 0.0 && nu_f > 0.0 && rho_s > 0.0 && nu_s > 0.0 && lambda > 0.0)) {
    throw std::invalid_argument("MaterialParams: densities, viscosity and Lame parameters must be positive");
  }
  if (alpha_f < 0.0 || alpha_s < 0.0) throw std::invalid_argument("MaterialParams: Robin coefficients must be >= 0");
}

std::pair<double, double> lame_from_young(double young, double poisson) {
  if (!(young > 0.0) || !(poisson > -1.0 && poisson < 0.5)) {
    throw std::invalid_argument("lame_from_young: need E > 0 and -1 < nu < 1/2");
  }
  const double mu = young / (2.0 * (1.0 + poisson));
  const double lambda = poisson * young / ((1.0 - 2.0 * poisson) * (1.0 + poisson));
  return {mu, lambda};
}

// ---------------------------------------------------------------------------

TraceSpace::TraceSpace(const FeSpace& space, const EssentialConstraints& bc) {
  if (space.vdim() != 2) throw std::invalid_argument("TraceSpace: needs a vector space");
  std::vector<int> active;
  for (int s : space.interface_scalar_dofs()) {
    if (!bc.is_constrained(space.dof(0, s))) active.push_back(s);
  }
  if (active.empty()) throw std::invalid_argument("TraceSpace: no free interface dofs");
  for (int c = 0; c < 2; ++c) {
    for (int s : active) global_.push_back(space.dof(c, s));
  }
  for (int s : active) nodes_.push_back(space.node(s));
  gamma_mass_ = assemble_form(space, space, FormKind::iface_mass, 1.0);
  lift_ = select_columns(gamma_mass_, global_);
  mass_.resize(size(), size());
  const Eigen::MatrixXd dense_lift = Eigen::MatrixXd(lift_);
  for (int i = 0; i < size(); ++i) mass_.row(i) = dense_lift.row(global_[i]);
  mass_llt_.compute(mass_);
  if (mass_llt_.info() != Eigen::Success) throw std::runtime_error("TraceSpace: singular interface mass");
}

DofVector TraceSpace::trace(const DofVector& u) const { return mass_llt_.solve(lift_.transpose() * u); }

DofVector TraceSpace::rows(const DofVector& v) const {
  DofVector out(size());
  for (int i = 0; i < size(); ++i) out(i) = v(global_[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Fluid

FluidForms assemble_fluid_forms(const FluidSetup& setup, const MaterialParams& params) {
  const FeSpace& v = *setup.velocity;
  const FeSpace& q = *setup.pressure;
  return {assemble_form(v, v, FormKind::mass, params.rho_f), assemble_form(v, v, FormKind::strain, 2.0 * params.nu_f),
          assemble_form(v, q, FormKind::div, -1.0), assemble_form(v, v, FormKind::iface_mass, 1.0)};
}

FluidLoads build_fluid_loads(const FluidSetup& setup, const FluidSource& source, const TimeGrid& grid) {
  const FeSpace& v = *setup.velocity;
  FluidLoads out;
  for (int m = 1; m <= grid.num_slabs(); ++m) {
    const double t = grid.t(m);
    DofVector b = source.forcing ? assemble_load(v, source.forcing, t) : DofVector::Zero(v.num_dofs());
    for (const auto& [tag, h] : source.tractions) b += assemble_boundary_load(v, tag, h, t);
    out.load.push_back(std::move(b));
    out.dirichlet.push_back(source.dirichlet ? interpolate(v, source.dirichlet, t) : DofVector::Zero(v.num_dofs()));
  }
  out.u0 = source.initial ? interpolate(v, source.initial, 0.0) : DofVector::Zero(v.num_dofs());
  return out;
}

FluidSolver::FluidSolver(FluidSetup setup, std::shared_ptr<const FluidForms> forms, InterfaceMode mode, double alpha,
                         std::shared_ptr<const TimeGrid> grid)
    : setup_(std::move(setup)), forms_(std::move(forms)), mode_(mode), alpha_(alpha), grid_(std::move(grid)) {
  if (mode_ == InterfaceMode::neumann) alpha_ = 0.0;
  if (alpha_ < 0.0) throw std::invalid_argument("FluidSolver: negative Robin coefficient");
  nv_ = setup_.velocity->num_dofs();
  nq_ = setup_.pressure->num_dofs();
  const int n = nv_ + nq_;
  const auto dofs = dirichlet_dofs(*setup_.velocity, setup_.dirichlet_tags, setup_.pinned_vertices);
  bc_ = EssentialConstraints(n, dofs);
  trace_ = std::make_shared<const TraceSpace>(*setup_.velocity, bc_);

  const auto& g = trace_->global_dofs();
  rows_mass_ = select_rows_symmetric(forms_->mass, g);
  rows_stiff_ = select_rows_symmetric(forms_->stiffness, g);
  rows_divt_ = SparseOperator(select_columns(forms_->div, g).transpose());

  std::vector<double> group_dt;
  group_steps(*grid_, dt_, slab_factor_, group_dt);
  for (double dt : group_dt) {
    const SparseOperator top = forms_->mass / dt + forms_->stiffness + alpha_ * forms_->gamma_mass;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(top.nonZeros() + 2 * forms_->div.nonZeros()));
    for (int k = 0; k < top.outerSize(); ++k) {
      for (SparseOperator::InnerIterator it(top, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    }
    for (int k = 0; k < forms_->div.outerSize(); ++k) {
      for (SparseOperator::InnerIterator it(forms_->div, k); it; ++it) {
        trip.emplace_back(nv_ + it.row(), it.col(), it.value());
        trip.emplace_back(it.col(), nv_ + it.row(), it.value());
      }
    }
    SparseOperator k_full(n, n);
    k_full.setFromTriplets(trip.begin(), trip.end());
    EssentialConstraints bc(n, dofs);
    const SparseOperator k = bc.eliminate(k_full);
    std::ostringstream name;
    name << "fluid slab matrix (dt=" << dt << ")";
    factors_.push_back(factorize(k, Factorization::Kind::general, name.str()));
    slab_bc_.push_back(std::move(bc));
  }
}

FluidState FluidSolver::step(int m, const DofVector& u_prev, const DofVector& load, const DofVector& dirichlet,
                             const DofVector& g) const {
  const double dt = dt_[m - 1];
  const int f = slab_factor_[m - 1];
  DofVector rhs = DofVector::Zero(nv_ + nq_);
  rhs.head(nv_) = forms_->mass * u_prev / dt;
  if (load.size()) rhs.head(nv_) += load;
  if (g.size()) rhs.head(nv_) += trace_->load(g);
  if (dirichlet.size()) {
    DofVector values = DofVector::Zero(nv_ + nq_);
    values.head(nv_) = dirichlet;
    slab_bc_[f].lift(rhs, values);
  } else {
    slab_bc_[f].zero(rhs);
  }
  const DofVector x = factors_[f]->solve(rhs);

  FluidState s;
  s.u = x.head(nv_);
  s.p = x.tail(nq_);
  DofVector residual = rows_mass_ * (s.u - u_prev) / dt + rows_stiff_ * s.u + rows_divt_ * s.p;
  if (load.size()) residual -= trace_->rows(load);
  s.trace_stress = trace_->solve_mass(residual);
  s.trace_u = trace_->trace(s.u);
  return s;
}

FluidSweep FluidSolver::sweep(const TraceSeries* data, const FluidLoads* loads, bool keep_history,
                              const Observer& observer) const {
  check_data(data, *grid_, trace_->size(), "FluidSolver::sweep");
  const int nslab = grid_->num_slabs();
  FluidSweep out{TraceSeries(grid_, trace_->size()), TraceSeries(grid_, trace_->size()), {}, std::nullopt};
  DofVector u = loads ? loads->u0 : DofVector::Zero(nv_);
  if (keep_history) out.history = FluidHistory{grid_, u, {}, {}};
  const DofVector empty;
  for (int m = 1; m <= nslab; ++m) {
    const DofVector g = data ? DofVector(data->slab(m)) : empty;
    FluidState s = step(m, u, loads ? loads->load[m - 1] : empty, loads ? loads->dirichlet[m - 1] : empty, g);
    out.trace_u.slab(m) = s.trace_u;
    out.trace_stress.slab(m) = s.trace_stress;
    if (observer) observer(m, s);
    if (keep_history) {
      out.history->u.push_back(s.u);
      out.history->p.push_back(s.p);
    }
    u = s.u;
    if (m == nslab) out.last = std::move(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure

StructureForms assemble_structure_forms(const StructureSetup& setup, const MaterialParams& params) {
  const FeSpace& v = *setup.displacement;
  return {assemble_form(v, v, FormKind::mass, params.rho_s),
          SparseOperator(assemble_form(v, v, FormKind::strain, 2.0 * params.nu_s) +
                         assemble_form(v, v, FormKind::divdiv, params.lambda)),
          assemble_form(v, v, FormKind::iface_mass, 1.0)};
}

StructureLoads build_structure_loads(const StructureSetup& setup, const StructureSource& source,
                                     const TimeGrid& grid) {
  const FeSpace& v = *setup.displacement;
  const DofVector zero = DofVector::Zero(v.num_dofs());
  StructureLoads out;
  for (int n = 1; n <= grid.num_slabs(); ++n) {
    const double t = grid.t(n);
    out.load.push_back(source.forcing ? assemble_load(v, source.forcing, t) : zero);
    out.dirichlet.push_back(source.dirichlet ? interpolate(v, source.dirichlet, t) : zero);
  }
  out.eta0 = source.initial_displacement ? interpolate(v, source.initial_displacement, 0.0) : zero;
  out.eta_dot0 = source.initial_velocity ? interpolate(v, source.initial_velocity, 0.0) : zero;
  return out;
}

StructureSolver::StructureSolver(StructureSetup setup, std::shared_ptr<const StructureForms> forms,
                                 InterfaceMode mode, double alpha, std::shared_ptr<const TimeGrid> grid)
    : setup_(std::move(setup)), forms_(std::move(forms)), mode_(mode), alpha_(alpha), grid_(std::move(grid)) {
  if (mode_ == InterfaceMode::neumann) alpha_ = 0.0;
  if (alpha_ < 0.0) throw std::invalid_argument("StructureSolver: negative Robin coefficient");
  const int n = setup_.displacement->num_dofs();
  const auto dofs = dirichlet_dofs(*setup_.displacement, setup_.dirichlet_tags);
  bc_ = EssentialConstraints(n, dofs);
  trace_ = std::make_shared<const TraceSpace>(*setup_.displacement, bc_);
  rows_mass_ = select_rows_symmetric(forms_->mass, trace_->global_dofs());
  rows_stiff_ = select_rows_symmetric(forms_->stiffness, trace_->global_dofs());

  std::vector<double> group_dt;
  group_steps(*grid_, dt_, slab_factor_, group_dt);
  for (double dt : group_dt) {
    const SparseOperator s_full = forms_->mass / dt + dt * forms_->stiffness + alpha_ * forms_->gamma_mass;
    EssentialConstraints bc(n, dofs);
    const SparseOperator s = bc.eliminate(s_full);
    std::ostringstream name;
    name << "structure slab matrix (dt=" << dt << ")";
    factors_.push_back(factorize(s, Factorization::Kind::spd, name.str()));
    slab_bc_.push_back(std::move(bc));
  }
}

StructureState StructureSolver::step(int n, const DofVector& eta_prev, const DofVector& eta_dot_prev,
                                     const DofVector& load, const DofVector& dirichlet, const DofVector& g) const {
  const double dt = dt_[n - 1];
  const int f = slab_factor_[n - 1];
  DofVector rhs = forms_->mass * eta_dot_prev / dt - forms_->stiffness * eta_prev;
  if (load.size()) rhs += load;
  if (g.size()) rhs += (mode_ == InterfaceMode::robin ? -1.0 : 1.0) * trace_->load(g);
  const DofVector velocity_values = ((dirichlet.size() ? dirichlet : DofVector::Zero(eta_prev.size())) - eta_prev) / dt;
  slab_bc_[f].lift(rhs, velocity_values);

  StructureState s;
  s.eta_dot = factors_[f]->solve(rhs);
  s.eta = eta_prev + dt * s.eta_dot;
  DofVector residual = rows_mass_ * (s.eta_dot - eta_dot_prev) / dt + rows_stiff_ * s.eta;
  if (load.size()) residual -= trace_->rows(load);
  s.trace_stress = trace_->solve_mass(residual);
  s.trace_velocity = trace_->trace(s.eta_dot);
  return s;
}

StructureSweep StructureSolver::sweep(const TraceSeries* data, const StructureLoads* loads, bool keep_history,
                                      const Observer& observer) const {
  check_data(data, *grid_, trace_->size(), "StructureSolver::sweep");
  const int nslab = grid_->num_slabs();
  const int ndof = setup_.displacement->num_dofs();
  StructureSweep out{TraceSeries(grid_, trace_->size()), TraceSeries(grid_, trace_->size()), {}, std::nullopt};
  DofVector eta = loads ? loads->eta0 : DofVector::Zero(ndof);
  DofVector eta_dot = loads ? loads->eta_dot0 : DofVector::Zero(ndof);
  if (keep_history) out.history = StructureHistory{grid_, eta, eta_dot, {}, {}};
  const DofVector empty;
  for (int n = 1; n <= nslab; ++n) {
    const DofVector g = data ? DofVector(data->slab(n)) : empty;
    StructureState s =
        step(n, eta, eta_dot, loads ? loads->load[n - 1] : empty, loads ? loads->dirichlet[n - 1] : empty, g);
    out.trace_velocity.slab(n) = s.trace_velocity;
    out.trace_stress.slab(n) = s.trace_stress;
    if (observer) observer(n, s);
    if (keep_history) {
      out.history->eta.push_back(s.eta);
      out.history->eta_dot.push_back(s.eta_dot);
    }
    eta = s.eta;
    eta_dot = s.eta_dot;
    if (n == nslab) out.last = std::move(s);
  }
  return out;
}

}  // namespace fsidd
