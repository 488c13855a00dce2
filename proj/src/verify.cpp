#include "fsidd/verify.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "fsidd/mms.hpp"

namespace fsidd {

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

template <class F>
void for_each_entry(const SparseOperator& a, F&& f) {
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(a, k); it; ++it) f(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  }
}

Eigen::MatrixXd dense(const SparseOperator& a) { return Eigen::MatrixXd(a); }

// Trace extraction and lift over the active (non-Dirichlet) interface dofs.
struct DenseTrace {
  std::vector<int> active;
  Eigen::MatrixXd extract;  // nt x ndof: M_aa^{-1} M_Γ(a, :)
  Eigen::MatrixXd lift;     // ndof x nt: M_Γ(:, a)
};

DenseTrace dense_trace(const FeSpace& space, const std::vector<char>& fixed) {
  DenseTrace t;
  for (int c = 0; c < 2; ++c) {
    for (int s : space.interface_scalar_dofs()) {
      const int d = space.dof(c, s);
      if (!fixed[d]) t.active.push_back(d);
    }
  }
  const Eigen::MatrixXd g = dense(assemble_form(space, space, FormKind::iface_mass, 1.0));
  const int nt = static_cast<int>(t.active.size());
  Eigen::MatrixXd rows(nt, g.cols()), maa(nt, nt);
  t.lift.resize(g.rows(), nt);
  for (int i = 0; i < nt; ++i) {
    rows.row(i) = g.row(t.active[i]);
    t.lift.col(i) = g.col(t.active[i]);
    for (int j = 0; j < nt; ++j) maa(i, j) = g(t.active[i], t.active[j]);
  }
  t.extract = maa.ldlt().solve(rows);
  return t;
}

std::vector<char> fixed_mask(int size, const std::vector<int>& dofs) {
  std::vector<char> mask(size, 0);
  for (int d : dofs) mask[d] = 1;
  return mask;
}

// Slab-major block projection: entry (i nt + d, j nt + d) = |I_i ∩ J_j| / |I_i|.
Eigen::MatrixXd dense_projection(const TimeGrid& source, const TimeGrid& target, int nt) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(target.num_slabs() * nt, source.num_slabs() * nt);
  for (int i = 1; i <= target.num_slabs(); ++i) {
    for (int j = 1; j <= source.num_slabs(); ++j) {
      const double lo = std::max(target.t(i - 1), source.t(j - 1));
      const double hi = std::min(target.t(i), source.t(j));
      if (hi <= lo) continue;
      const double w = (hi - lo) / target.dt(i);
      for (int d = 0; d < nt; ++d) p((i - 1) * nt + d, (j - 1) * nt + d) = w;
    }
  }
  return p;
}

// Interface response of one subdomain: trace output per slab for unit data
// (columns slab-major) and for the true loads.
struct Response {
  Eigen::MatrixXd data;
  Eigen::VectorXd loads;
};

Response fluid_response(const CoupledProblem& problem, double alpha) {
  const FeSpace& v = *problem.fluid.velocity;
  const FeSpace& q = *problem.fluid.pressure;
  const MaterialParams& k = problem.params;
  const TimeGrid& grid = *problem.grid_f;
  const int nv = v.num_dofs(), nq = q.num_dofs(), n = nv + nq, nslab = grid.num_slabs();

  const SparseOperator mass = assemble_form(v, v, FormKind::mass, k.rho_f);
  const SparseOperator visc = assemble_form(v, v, FormKind::strain, 2.0 * k.nu_f);
  const SparseOperator gmass = assemble_form(v, v, FormKind::iface_mass, 1.0);
  const SparseOperator div = assemble_form(v, q, FormKind::div, -1.0);
  const auto fixed = fixed_mask(nv, dirichlet_dofs(v, problem.fluid.dirichlet_tags, problem.fluid.pinned_vertices));
  const DenseTrace tr = dense_trace(v, fixed);
  const int nt = static_cast<int>(tr.active.size());
  const FluidLoads loads = build_fluid_loads(problem.fluid, problem.fluid_source, grid);

  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n * nslab, n * nslab);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n * nslab, nt * nslab + 1);
  for (int m = 0; m < nslab; ++m) {
    const double dt = grid.dt(m + 1);
    const int o = m * n;
    for_each_entry(mass, [&](int i, int j, double a) {
      if (fixed[i]) return;
      sys(o + i, o + j) += a / dt;
      if (m > 0) sys(o + i, o - n + j) -= a / dt;
    });
    for_each_entry(visc, [&](int i, int j, double a) {
      if (!fixed[i]) sys(o + i, o + j) += a;
    });
    for_each_entry(gmass, [&](int i, int j, double a) {
      if (!fixed[i]) sys(o + i, o + j) += alpha * a;
    });
    for_each_entry(div, [&](int r, int c, double a) {
      sys(o + nv + r, o + c) += a;
      if (!fixed[c]) sys(o + c, o + nv + r) += a;
    });
    for (int i = 0; i < nv; ++i) {
      if (fixed[i]) {
        sys(o + i, o + i) = 1.0;
        rhs(o + i, nt * nslab) = loads.dirichlet[m](i);
      } else {
        rhs(o + i, nt * nslab) = loads.load[m](i);
        for (int d = 0; d < nt; ++d) rhs(o + i, m * nt + d) = tr.lift(i, d);
      }
    }
  }
  const Eigen::VectorXd carried = dense(mass) * loads.u0 / grid.dt(1);
  for (int i = 0; i < nv; ++i) {
    if (!fixed[i]) rhs(i, nt * nslab) += carried(i);
  }

  const Eigen::MatrixXd x = sys.partialPivLu().solve(rhs);
  Eigen::MatrixXd out(nt * nslab, nt * nslab + 1);
  for (int m = 0; m < nslab; ++m) out.middleRows(m * nt, nt) = tr.extract * x.middleRows(m * n, nv);
  return {out.leftCols(nt * nslab), out.col(nt * nslab)};
}

// Structure in (eta, eta_dot) unknowns with the kinematic rows kept explicit.
// Interface data enters as +g (Neumann, sigma_s n_s = g) or -g (Robin).
Response structure_response(const CoupledProblem& problem, double alpha, double data_sign) {
  const FeSpace& v = *problem.structure.displacement;
  const MaterialParams& k = problem.params;
  const TimeGrid& grid = *problem.grid_s;
  const int ns = v.num_dofs(), n = 2 * ns, nslab = grid.num_slabs();

  const SparseOperator mass = assemble_form(v, v, FormKind::mass, k.rho_s);
  const SparseOperator stiff = SparseOperator(assemble_form(v, v, FormKind::strain, 2.0 * k.nu_s) +
                                              assemble_form(v, v, FormKind::divdiv, k.lambda));
  const SparseOperator gmass = assemble_form(v, v, FormKind::iface_mass, 1.0);
  const auto fixed = fixed_mask(ns, dirichlet_dofs(v, problem.structure.dirichlet_tags));
  const DenseTrace tr = dense_trace(v, fixed);
  const int nt = static_cast<int>(tr.active.size());
  const StructureLoads loads = build_structure_loads(problem.structure, problem.structure_source, grid);

  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n * nslab, n * nslab);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n * nslab, nt * nslab + 1);
  for (int s = 0; s < nslab; ++s) {
    const double dt = grid.dt(s + 1);
    const int o = s * n, w = o + ns;
    for_each_entry(mass, [&](int i, int j, double a) {
      if (fixed[i]) return;
      sys(o + i, w + j) += a / dt;
      if (s > 0) sys(o + i, w - n + j) -= a / dt;
    });
    for_each_entry(stiff, [&](int i, int j, double a) {
      if (!fixed[i]) sys(o + i, o + j) += a;
    });
    for_each_entry(gmass, [&](int i, int j, double a) {
      if (!fixed[i]) sys(o + i, w + j) += alpha * a;
    });
    for (int i = 0; i < ns; ++i) {
      if (fixed[i]) {
        sys(o + i, o + i) = 1.0;
        rhs(o + i, nt * nslab) = loads.dirichlet[s](i);
      } else {
        rhs(o + i, nt * nslab) = loads.load[s](i);
        for (int d = 0; d < nt; ++d) rhs(o + i, s * nt + d) = data_sign * tr.lift(i, d);
      }
      sys(w + i, o + i) = 1.0;
      sys(w + i, w + i) = -dt;
      if (s > 0) sys(w + i, o - n + i) = -1.0;
    }
  }
  const Eigen::VectorXd carried = dense(mass) * loads.eta_dot0 / grid.dt(1);
  for (int i = 0; i < ns; ++i) {
    if (!fixed[i]) rhs(i, nt * nslab) += carried(i);
    rhs(ns + i, nt * nslab) = loads.eta0(i);
  }

  const Eigen::MatrixXd x = sys.partialPivLu().solve(rhs);
  Eigen::MatrixXd out(nt * nslab, nt * nslab + 1);
  for (int s = 0; s < nslab; ++s) out.middleRows(s * nt, nt) = tr.extract * x.middleRows(s * n + ns, ns);
  return {out.leftCols(nt * nslab), out.col(nt * nslab)};
}

}  // namespace

DenseOracle dense_oracle(const CoupledProblem& problem) {
  const MaterialParams& k = problem.params;
  const Response f = fluid_response(problem, 0.0);
  const Response s = structure_response(problem, 0.0, 1.0);
  const int nt = static_cast<int>(f.data.rows()) / problem.grid_f->num_slabs();
  const Eigen::MatrixXd pfs = dense_projection(*problem.grid_s, *problem.grid_f, nt);
  const Eigen::MatrixXd psf = dense_projection(*problem.grid_f, *problem.grid_s, nt);

  DenseOracle out;
  out.sp = f.data + pfs * s.data * psf;
  out.sp_rhs = -(f.loads - pfs * s.loads);

  const double a = k.alpha_f + k.alpha_s;
  const Response fr = fluid_response(problem, k.alpha_f);
  const Response sr = structure_response(problem, k.alpha_s, -1.0);
  const Eigen::Index mf = fr.data.rows(), ms = sr.data.rows();
  out.robin.setIdentity(mf + ms, mf + ms);
  out.robin.topRightCorner(mf, ms) = -pfs * (Eigen::MatrixXd::Identity(ms, ms) + a * sr.data);
  out.robin.bottomLeftCorner(ms, mf) = -psf * (Eigen::MatrixXd::Identity(mf, mf) - a * fr.data);
  out.robin_rhs.resize(mf + ms);
  out.robin_rhs << a * pfs * sr.loads, -a * psf * fr.loads;
  return out;
}

Eigen::MatrixXd probe_columns(const LinearMap& apply, int size) {
  Eigen::MatrixXd out(size, size);
  for (int j = 0; j < size; ++j) out.col(j) = apply(DofVector::Unit(size, j));
  return out;
}

double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  const double scale = b.cwiseAbs().maxCoeff();
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

double linearity_defect(const LinearMap& apply, int size, int probes, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    DofVector v(size);
    for (auto& x : v) x = normal(rng);
    return v;
  };
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const DofVector x = random_vector(), y = random_vector();
    const double a = normal(rng), b = normal(rng);
    const DofVector ax = apply(x), ay = apply(y);
    const DofVector lhs = apply(a * x + b * y);
    const double scale = std::abs(a) * ax.norm() + std::abs(b) * ay.norm();
    worst = std::max(worst, (lhs - a * ax - b * ay).norm() / scale);
  }
  return worst;
}

MmsExactness check_mms_exactness(const MaterialParams& params, int points, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = 1e-3;
  auto d4 = [h](const auto& f) {
    return ((f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)).eval();
  };
  auto div_rows = [&](auto sigma, double x, double y, double t) {
    const Eigen::Vector2d dx = d4([&](double e) { return Eigen::Vector2d(sigma(x + e, y, t).col(0)); });
    const Eigen::Vector2d dy = d4([&](double e) { return Eigen::Vector2d(sigma(x, y + e, t).col(1)); });
    return Eigen::Vector2d(dx + dy);
  };
  auto sigma_f = [&](double x, double y, double t) { return mms_exact(params, x, y, t).sigma_f; };
  auto sigma_s = [&](double x, double y, double t) { return mms_exact(params, x, y, t).sigma_s; };

  MmsExactness r;
  for (int k = 0; k < points; ++k) {
    const double x = unit(rng), t = 0.2 * unit(rng);
    const double yf = unit(rng), ys = 1.0 + unit(rng);

    const MmsValues vf = mms_exact(params, x, yf, t);
    r.divergence = std::max(r.divergence, std::abs(vf.grad_u(0, 0) + vf.grad_u(1, 1)));
    const Eigen::Vector2d ut = d4([&](double e) { return mms_exact(params, x, yf, t + e).u; });
    const Eigen::Vector2d ff = params.rho_f * ut - div_rows(sigma_f, x, yf, t);
    r.forcing = std::max(r.forcing, (ff - vf.f_f).cwiseAbs().maxCoeff());

    const MmsValues vs = mms_exact(params, x, ys, t);
    const Eigen::Vector2d et = d4([&](double e) { return mms_exact(params, x, ys, t + e).eta; });
    r.eta_dot = std::max(r.eta_dot, (et - vs.eta_dot).cwiseAbs().maxCoeff());
    const Eigen::Vector2d ett = d4([&](double e) { return mms_exact(params, x, ys, t + e).eta_dot; });
    const Eigen::Vector2d fs = params.rho_s * ett - div_rows(sigma_s, x, ys, t);
    r.forcing = std::max(r.forcing, (fs - vs.f_s).cwiseAbs().maxCoeff());

    const MmsValues vi = mms_exact(params, x, 1.0, t);
    r.kinematics = std::max(r.kinematics, (vi.eta_dot - vi.u).cwiseAbs().maxCoeff());
  }
  return r;
}

ProjectionProperties check_projection_properties(int series, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> slabs(1, 9);
  const double T = 0.7;
  auto random_grid = [&] {
    std::vector<double> pts{0.0, T};
    const int n = slabs(rng);
    for (int k = 1; k < n; ++k) pts.push_back(T * unit(rng));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return std::make_shared<const TimeGrid>(std::move(pts));
  };

  ProjectionProperties r;
  const int ndof = 5;
  for (int k = 0; k < series; ++k) {
    const auto a = random_grid(), b = random_grid();
    TraceSeries phi(a, ndof);
    phi.values() = Eigen::MatrixXd::Random(ndof, a->num_slabs());
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(ndof, ndof);
    w = w * w.transpose() + Eigen::MatrixXd::Identity(ndof, ndof);

    const TraceSeries same = project(phi, std::make_shared<const TimeGrid>(a->points()));
    r.identity = std::max(r.identity, (same.values() - phi.values()).cwiseAbs().maxCoeff());

    const TraceSeries to_b = project(phi, b);
    const Eigen::VectorXd i0 = phi.integral();
    r.integral = std::max(r.integral, (to_b.integral() - i0).cwiseAbs().maxCoeff() / i0.cwiseAbs().maxCoeff());
    for (const Eigen::MatrixXd* weight : std::array<const Eigen::MatrixXd*, 2>{nullptr, &w}) {
      const double n0 = phi.l2_norm(weight);
      r.expansion = std::max(r.expansion, (to_b.l2_norm(weight) - n0) / n0);
    }
  }
  return r;
}

RobinIdentity check_robin_identities(ElementSet elements, int n, InterfaceMode mode, double alpha_f,
                                     double alpha_s, unsigned seed) {
  MaterialParams params{1.3, 0.7, 2.1, 1.7, 3.1, alpha_f, alpha_s};
  auto gf = std::make_shared<const TimeGrid>(std::vector<double>{0.0, 0.02, 0.05, 0.1});
  auto gs = std::make_shared<const TimeGrid>(std::vector<double>{0.0, 0.01, 0.04, 0.07, 0.1});
  const CoupledProblem problem = make_mms_problem(elements, n, params, gf, gs);
  const SubdomainForms forms = assemble_forms(problem);
  const FluidSolver fluid(problem.fluid, forms.fluid, mode, alpha_f, gf);
  const StructureSolver structure(problem.structure, forms.structure, mode, alpha_s, gs);
  const FluidLoads fl = build_fluid_loads(problem.fluid, problem.fluid_source, *gf);
  const StructureLoads sl = build_structure_loads(problem.structure, problem.structure_source, *gs);

  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  auto random_series = [&](std::shared_ptr<const TimeGrid> grid, int ndof) {
    TraceSeries s(std::move(grid), ndof);
    for (auto& x : s.values().reshaped()) x = normal(rng);
    return s;
  };
  const bool robin = mode == InterfaceMode::robin;
  const TraceSeries df = random_series(gf, fluid.trace_space().size());
  const TraceSeries ds = random_series(gs, structure.trace_space().size());
  const FluidSweep fw = fluid.sweep(&df, &fl);
  const StructureSweep sw = structure.sweep(&ds, &sl);

  RobinIdentity r;
  const TraceSpace& tf = fluid.trace_space();
  for (int m = 1; m <= gf->num_slabs(); ++m) {
    DofVector lhs = fw.trace_stress.slab(m);
    if (robin) lhs += alpha_f * fw.trace_u.slab(m);
    const DofVector g = df.slab(m);
    r.fluid = std::max(r.fluid, std::sqrt(tf.norm2(lhs - g) / tf.norm2(g)));
  }
  const TraceSpace& ts = structure.trace_space();
  for (int k = 1; k <= gs->num_slabs(); ++k) {
    DofVector lhs = sw.trace_stress.slab(k);
    if (robin) lhs = -lhs - alpha_s * sw.trace_velocity.slab(k);
    const DofVector g = ds.slab(k);
    r.structure = std::max(r.structure, std::sqrt(ts.norm2(lhs - g) / ts.norm2(g)));
  }
  return r;
}

double energy_increase(const std::vector<double>& energy) {
  double worst = -INFINITY;
  for (std::size_t k = 1; k < energy.size(); ++k) {
    worst = std::max(worst, (energy[k] - energy[k - 1]) / energy[k - 1]);
  }
  return energy.size() < 2 ? 0.0 : worst;
}

namespace {

Check make_check(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, std::isfinite(value) && value <= threshold};
}

Check detection_check(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, std::isfinite(value) && value > threshold};
}

SubdomainForms perturbed(const SubdomainForms& forms, const CoupledProblem& problem) {
  FluidForms f = *forms.fluid;
  StructureForms s = *forms.structure;
  const int fd = FluidSolver(problem.fluid, forms.fluid, InterfaceMode::neumann, 0.0, problem.grid_f)
                     .trace_space()
                     .global_dofs()
                     .front();
  const int sd = StructureSolver(problem.structure, forms.structure, InterfaceMode::neumann, 0.0, problem.grid_s)
                     .trace_space()
                     .global_dofs()
                     .front();
  f.stiffness.coeffRef(fd, fd) *= 1.0 + 1e-3;
  s.mass.coeffRef(sd, sd) *= 1.0 + 1e-3;
  return {std::make_shared<const FluidForms>(std::move(f)), std::make_shared<const StructureForms>(std::move(s))};
}

}  // namespace

VerificationReport run_verification(const RunConfig& config) {
  VerificationReport report;
  const MaterialParams params{1.3, 0.7, 2.1, 1.7, 3.1, config.alpha_f, config.alpha_s};
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> grids = {
      {{0.0, 0.1}, {0.0, 0.1}},
      {{0.0, 0.04, 0.1}, {0.0, 0.03, 0.07, 0.1}},
      {{0.0, 0.03, 0.06, 0.1}, {0.0, 0.05, 0.1}},
  };

  double sp_dev = 0.0, robin_dev = 0.0, sp_rhs_dev = 0.0, robin_rhs_dev = 0.0;
  double sp_lin = 0.0, robin_lin = 0.0, zero = 0.0, sp_fault = INFINITY, robin_fault = INFINITY;
  for (ElementSet elements : {ElementSet::taylor_hood_p2, ElementSet::mini_p1}) {
    for (int n : {2, 4}) {
      for (const auto& [pf, ps] : grids) {
        const CoupledProblem problem = make_mms_problem(elements, n, params, std::make_shared<const TimeGrid>(pf),
                                                        std::make_shared<const TimeGrid>(ps));
        const SubdomainForms forms = assemble_forms(problem);
        const DenseOracle oracle = dense_oracle(problem);
        const SpInterface sp(problem, forms);
        const RobinInterface robin(problem, forms);
        const LinearMap sp_apply = [&sp](const DofVector& g) { return sp.apply(g); };
        const LinearMap robin_apply = [&robin](const DofVector& z) { return robin.apply(z); };

        sp_dev = std::max(sp_dev, relative_deviation(probe_columns(sp_apply, sp.size()), oracle.sp));
        robin_dev = std::max(robin_dev, relative_deviation(probe_columns(robin_apply, robin.size()), oracle.robin));
        sp_rhs_dev = std::max(sp_rhs_dev, relative_deviation(sp.rhs(), oracle.sp_rhs));
        robin_rhs_dev = std::max(robin_rhs_dev, relative_deviation(robin.rhs(), oracle.robin_rhs));
        sp_lin = std::max(sp_lin, linearity_defect(sp_apply, sp.size(), 3, 11u + n));
        robin_lin = std::max(robin_lin, linearity_defect(robin_apply, robin.size(), 3, 17u + n));
        zero = std::max({zero, sp.apply(DofVector::Zero(sp.size())).cwiseAbs().maxCoeff(),
                         robin.apply(DofVector::Zero(robin.size())).cwiseAbs().maxCoeff()});

        const SubdomainForms bad = perturbed(forms, problem);
        const SpInterface sp_bad(problem, bad);
        const RobinInterface robin_bad(problem, bad);
        sp_fault = std::min(sp_fault, relative_deviation(
                                          probe_columns([&](const DofVector& g) { return sp_bad.apply(g); },
                                                        sp_bad.size()),
                                          oracle.sp));
        robin_fault = std::min(robin_fault, relative_deviation(
                                                probe_columns([&](const DofVector& z) { return robin_bad.apply(z); },
                                                              robin_bad.size()),
                                                oracle.robin));
      }
    }
  }
  report.checks.push_back(make_check("sp operator equals dense oracle", sp_dev, 1e-10));
  report.checks.push_back(make_check("robin operator equals dense oracle", robin_dev, 1e-10));
  report.checks.push_back(make_check("sp rhs equals dense oracle", sp_rhs_dev, 1e-10));
  report.checks.push_back(make_check("robin rhs equals dense oracle", robin_rhs_dev, 1e-10));
  report.checks.push_back(make_check("sp operator linear on random probes", sp_lin, 1e-11));
  report.checks.push_back(make_check("robin operator linear on random probes", robin_lin, 1e-11));
  report.checks.push_back(make_check("operators map zero to zero", zero, 0.0));
  report.checks.push_back(detection_check("perturbed form detected by sp oracle", sp_fault, 1e-10));
  report.checks.push_back(detection_check("perturbed form detected by robin oracle", robin_fault, 1e-10));

  const ProjectionProperties pp = check_projection_properties(100, 5u);
  report.checks.push_back(make_check("projection is identity on conforming grids", pp.identity, 0.0));
  report.checks.push_back(make_check("projection preserves time integrals", pp.integral, 1e-13));
  report.checks.push_back(make_check("projection is non-expansive", pp.expansion, 1e-12));

  double fluid_id = 0.0, structure_id = 0.0;
  for (ElementSet elements : {ElementSet::taylor_hood_p2, ElementSet::mini_p1}) {
    for (InterfaceMode mode : {InterfaceMode::robin, InterfaceMode::neumann}) {
      const RobinIdentity id = check_robin_identities(elements, 4, mode, config.alpha_f, config.alpha_s, 23u);
      fluid_id = std::max(fluid_id, id.fluid);
      structure_id = std::max(structure_id, id.structure);
    }
  }
  report.checks.push_back(make_check("fluid interface identity after slab solves", fluid_id, 1e-10));
  report.checks.push_back(make_check("structure interface identity after slab solves", structure_id, 1e-10));

  {
    MaterialParams swr_params = params;
    swr_params.alpha_f = swr_params.alpha_s = 10.0;
    const CoupledProblem problem =
        make_mms_problem(ElementSet::taylor_hood_p2, 4, swr_params,
                         std::make_shared<const TimeGrid>(make_uniform_grid(0.1, 4)),
                         std::make_shared<const TimeGrid>(make_uniform_grid(0.1, 8)));
    const RobinInterface robin(problem, assemble_forms(problem));
    const SwrResult swr = swr_solve(robin, 1e-8, 300);
    report.checks.push_back(make_check("swr energy nonincreasing for equal coefficients",
                                       energy_increase(swr.report.energy), 1e-9));
    report.checks.push_back(make_check("swr converged", swr.report.converged ? 0.0 : 1.0, 0.0));
  }

  const MmsExactness mms = check_mms_exactness(params, 20, 29u);
  report.checks.push_back(make_check("manufactured velocity divergence-free", mms.divergence, 1e-12));
  report.checks.push_back(make_check("manufactured interface kinematics", mms.kinematics, 1e-12));
  report.checks.push_back(make_check("manufactured forcings match finite differences", mms.forcing, 1e-6));
  report.checks.push_back(make_check("manufactured structure velocity matches finite differences", mms.eta_dot, 1e-8));
  return report;
}

}  // namespace fsidd
