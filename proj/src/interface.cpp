#include "fsidd/interface.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>

namespace fsidd {

const char* to_string(Method method) {
  switch (method) {
    case Method::sp: return "sp";
    case Method::robin_gmres: return "robin_gmres";
    case Method::robin_swr: return "robin_swr";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "sp") return Method::sp;
  if (name == "robin_gmres") return Method::robin_gmres;
  if (name == "robin_swr") return Method::robin_swr;
  throw std::invalid_argument("unknown method '" + name + "' (expected sp, robin_gmres or robin_swr)");
}

SubdomainForms assemble_forms(const CoupledProblem& problem) {
  return {std::make_shared<const FluidForms>(assemble_fluid_forms(problem.fluid, problem.params)),
          std::make_shared<const StructureForms>(assemble_structure_forms(problem.structure, problem.params))};
}

DofVector flatten(const TraceSeries& series) {
  return Eigen::Map<const DofVector>(series.values().data(), series.values().size());
}

TraceSeries unflatten(const DofVector& z, std::shared_ptr<const TimeGrid> grid, int ndof, Eigen::Index offset) {
  const int nslab = grid->num_slabs();
  const Eigen::Index n = static_cast<Eigen::Index>(ndof) * nslab;
  if (offset < 0 || offset + n > z.size()) throw std::invalid_argument("unflatten: vector too short");
  Eigen::MatrixXd values = Eigen::Map<const Eigen::MatrixXd>(z.data() + offset, ndof, nslab);
  return TraceSeries(std::move(grid), std::move(values));
}

namespace {

TraceSeries scaled(TraceSeries s, double a) {
  s.values() *= a;
  return s;
}

TraceSeries combine(const TraceSeries& a, double ca, const TraceSeries& b, double cb) {
  return TraceSeries(a.grid_ptr(), ca * a.values() + cb * b.values());
}

void check_matching_traces(const TraceSpace& f, const TraceSpace& s) {
  if (f.size() != s.size()) {
    throw std::invalid_argument("interface trace spaces differ: " + std::to_string(f.num_nodes()) + " fluid nodes vs " +
                                std::to_string(s.num_nodes()) + " structure nodes");
  }
  for (int i = 0; i < f.num_nodes(); ++i) {
    const Point& a = f.nodes()[i];
    const Point& b = s.nodes()[i];
    const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y)});
    if (std::hypot(a.x - b.x, a.y - b.y) > 1e-10 * scale) {
      throw std::invalid_argument("interface trace nodes do not coincide");
    }
  }
}

}  // namespace

CoupledSolution CoupledSweeps::sweep_both(const TraceSeries* data_f, const TraceSeries* data_s, bool with_loads,
                                          bool keep_history, const SweepObservers& observers) const {
  auto structure = std::async(std::launch::async, [&] {
    return structure_.sweep(data_s, with_loads ? &structure_loads_ : nullptr, keep_history, observers.structure);
  });
  FluidSweep fluid = fluid_.sweep(data_f, with_loads ? &fluid_loads_ : nullptr, keep_history, observers.fluid);
  return {std::move(fluid), structure.get()};
}

CoupledSweeps::CoupledSweeps(const CoupledProblem& problem, const SubdomainForms& forms, InterfaceMode mode)
    : params_(problem.params),
      fluid_(problem.fluid, forms.fluid, mode, problem.params.alpha_f, problem.grid_f),
      structure_(problem.structure, forms.structure, mode, problem.params.alpha_s, problem.grid_s),
      fluid_loads_(build_fluid_loads(problem.fluid, problem.fluid_source, *problem.grid_f)),
      structure_loads_(build_structure_loads(problem.structure, problem.structure_source, *problem.grid_s)) {
  params_.validate();
  if (std::abs(problem.grid_f->final_time() - problem.grid_s->final_time()) >
      1e-12 * problem.grid_f->final_time()) {
    throw std::invalid_argument("fluid and structure grids end at different times");
  }
  check_matching_traces(fluid_.trace_space(), structure_.trace_space());
}

CoupledSolution CoupledSweeps::run(const TraceSeries* data_f, const TraceSeries* data_s, bool keep_history,
                                   const SweepObservers& observers) const {
  return sweep_both(data_f, data_s, true, keep_history, observers);
}

// ---------------------------------------------------------------------------

SpInterface::SpInterface(const CoupledProblem& problem, const SubdomainForms& forms)
    : sweeps_(problem, forms, InterfaceMode::neumann) {}

int SpInterface::size() const { return sweeps_.trace_size() * sweeps_.grid_f()->num_slabs(); }

DofVector SpInterface::apply(const DofVector& z) const {
  const TraceSeries g = unflatten(z, sweeps_.grid_f(), sweeps_.trace_size());
  const TraceSeries gs = scaled(project(g, sweeps_.grid_s()), -1.0);
  const CoupledSolution r = sweeps_.sweep_both(&g, &gs, false);
  return flatten(combine(r.fluid.trace_u, 1.0, project(r.structure.trace_velocity, sweeps_.grid_f()), -1.0));
}

DofVector SpInterface::rhs() const {
  const CoupledSolution zero = sweeps_.run(nullptr, nullptr);
  return flatten(combine(zero.fluid.trace_u, -1.0, project(zero.structure.trace_velocity, sweeps_.grid_f()), 1.0));
}

CoupledSolution SpInterface::finalize(const DofVector& z, bool keep_history, const SweepObservers& observers) const {
  const TraceSeries g = unflatten(z, sweeps_.grid_f(), sweeps_.trace_size());
  const TraceSeries gs = scaled(project(g, sweeps_.grid_s()), -1.0);
  return sweeps_.run(&g, &gs, keep_history, observers);
}

// ---------------------------------------------------------------------------

RobinInterface::RobinInterface(const CoupledProblem& problem, const SubdomainForms& forms)
    : sweeps_(problem, forms, InterfaceMode::robin), alpha_sum_(problem.params.alpha_f + problem.params.alpha_s) {
  if (!(alpha_sum_ > 0.0)) throw std::invalid_argument("RobinInterface: alpha_f + alpha_s must be positive");
}

int RobinInterface::size_f() const { return sweeps_.trace_size() * sweeps_.grid_f()->num_slabs(); }

int RobinInterface::size() const { return size_f() + sweeps_.trace_size() * sweeps_.grid_s()->num_slabs(); }

TraceSeries RobinInterface::data_f(const DofVector& z) const {
  return unflatten(z, sweeps_.grid_f(), sweeps_.trace_size());
}

TraceSeries RobinInterface::data_s(const DofVector& z) const {
  return unflatten(z, sweeps_.grid_s(), sweeps_.trace_size(), size_f());
}

DofVector RobinInterface::join(const TraceSeries& g_f, const TraceSeries& g_s) const {
  DofVector z(size());
  z << flatten(g_f), flatten(g_s);
  return z;
}

DofVector RobinInterface::apply(const DofVector& z) const {
  const TraceSeries gf = data_f(z);
  const TraceSeries gs = data_s(z);
  const CoupledSolution r = sweeps_.sweep_both(&gf, &gs, false);
  const TraceSeries out_f =
      combine(gf, 1.0, project(combine(gs, 1.0, r.structure.trace_velocity, alpha_sum_), gf.grid_ptr()), -1.0);
  const TraceSeries out_s =
      combine(gs, 1.0, project(combine(gf, 1.0, r.fluid.trace_u, -alpha_sum_), gs.grid_ptr()), -1.0);
  return join(out_f, out_s);
}

DofVector RobinInterface::rhs() const {
  const CoupledSolution zero = sweeps_.run(nullptr, nullptr);
  return join(scaled(project(zero.structure.trace_velocity, sweeps_.grid_f()), alpha_sum_),
              scaled(project(zero.fluid.trace_u, sweeps_.grid_s()), -alpha_sum_));
}

CoupledSolution RobinInterface::finalize(const DofVector& z, bool keep_history,
                                         const SweepObservers& observers) const {
  const TraceSeries gf = data_f(z);
  const TraceSeries gs = data_s(z);
  return sweeps_.run(&gf, &gs, keep_history, observers);
}

// ---------------------------------------------------------------------------

double interface_energy(const CoupledSweeps& sweeps, const TraceSeries& d_f, const TraceSeries& d_s) {
  const double a = sweeps.params().alpha_f + sweeps.params().alpha_s;
  const double ef = d_f.l2_norm(&sweeps.fluid().trace_space().mass());
  const double es = d_s.l2_norm(&sweeps.structure().trace_space().mass());
  return (ef * ef + es * es) / (2.0 * a);
}

SwrResult swr_solve(const RobinInterface& robin, double tol, int maxit, const DofVector* initial) {
  const CoupledSweeps& sw = robin.sweeps();
  const double af = sw.params().alpha_f, as = sw.params().alpha_s;
  SwrResult out;
  out.z = initial ? *initial : DofVector::Zero(robin.size());
  if (out.z.size() != robin.size()) throw std::invalid_argument("swr_solve: initial guess has the wrong size");

  // Unprojected outgoing Robin data of the previous iterate, for B^k.
  std::optional<TraceSeries> prev_f, prev_s;
  for (int k = 1; k <= maxit; ++k) {
    const TraceSeries gf = robin.data_f(out.z);
    const TraceSeries gs = robin.data_s(out.z);
    const CoupledSolution sol = sw.run(&gf, &gs);
    // sigma_f n_f - α_s u on the fluid grid, α_f eta_dot - sigma_s n_s on the structure grid
    TraceSeries to_s = combine(sol.fluid.trace_stress, 1.0, sol.fluid.trace_u, -as);
    TraceSeries to_f = combine(sol.structure.trace_velocity, af, sol.structure.trace_stress, -1.0);
    const DofVector next = robin.join(project(to_f, sw.grid_f()), project(to_s, sw.grid_s()));

    const double norm = next.norm();
    const double change = (next - out.z).norm();
    const double update = norm > 0.0 ? change / norm : change;
    out.report.updates.push_back(update);
    if (prev_f) {
      out.report.energy.push_back(
          interface_energy(sw, combine(to_s, 1.0, *prev_s, -1.0), combine(to_f, 1.0, *prev_f, -1.0)));
    }
    prev_f = std::move(to_f);
    prev_s = std::move(to_s);
    out.z = next;
    out.report.iterations = k;
    if (update <= tol) {
      out.report.converged = true;
      break;
    }
  }
  return out;
}

InterfaceSolve solve_interface(const SpInterface& sp, double tol, int maxit) {
  InterfaceSolve out;
  out.method = Method::sp;
  GmresResult r = gmres([&sp](const DofVector& g) { return sp.apply(g); }, sp.rhs(), tol, maxit);
  out.z = std::move(r.x);
  out.krylov = std::move(r.report);
  out.iterations = out.krylov.iterations;
  out.converged = out.krylov.converged;
  return out;
}

InterfaceSolve solve_interface(const RobinInterface& robin, Method method, double tol, int maxit) {
  InterfaceSolve out;
  out.method = method;
  if (method == Method::robin_gmres) {
    GmresResult r = gmres([&robin](const DofVector& z) { return robin.apply(z); }, robin.rhs(), tol, maxit);
    out.z = std::move(r.x);
    out.krylov = std::move(r.report);
    out.iterations = out.krylov.iterations;
    out.converged = out.krylov.converged;
  } else if (method == Method::robin_swr) {
    SwrResult r = swr_solve(robin, tol, maxit);
    out.z = std::move(r.z);
    out.swr = std::move(r.report);
    out.iterations = out.swr.iterations;
    out.converged = out.swr.converged;
  } else {
    throw std::invalid_argument("solve_interface: sp is not a Robin method");
  }
  return out;
}

double interface_velocity_error(const CoupledSweeps& sweeps, const CoupledSolution& solution, bool projected) {
  const TraceSpace& ts = sweeps.fluid().trace_space();
  DofVector jump;
  if (projected) {
    const TraceSeries eta_dot = project(solution.structure.trace_velocity, sweeps.grid_f());
    const int last = eta_dot.num_slabs();
    jump = solution.fluid.trace_u.slab(last) - eta_dot.slab(last);
  } else {
    jump = solution.fluid.last.trace_u - solution.structure.last.trace_velocity;
  }
  return 0.5 * ts.norm2(jump);
}

}  // namespace fsidd
