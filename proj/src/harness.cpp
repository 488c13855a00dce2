#include "fsidd/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "fsidd/mms.hpp"

namespace fsidd {

const std::array<double, 3> kMonitorX{1.5, 3.0, 4.5};

const char* to_string(ElementSet elements) {
  return elements == ElementSet::taylor_hood_p2 ? "taylor_hood_p2" : "mini_p1";
}

ElementSet parse_element_set(const std::string& name) {
  if (name == "taylor_hood_p2") return ElementSet::taylor_hood_p2;
  if (name == "mini_p1") return ElementSet::mini_p1;
  throw std::invalid_argument("unknown element set '" + name + "' (expected taylor_hood_p2 or mini_p1)");
}

void RunConfig::validate() const {
  if (case_name != "mms" && case_name != "hemo" && case_name != "verify") {
    throw std::invalid_argument("case must be mms, hemo or verify, got '" + case_name + "'");
  }
  if (!(h > 0 && hx > 0 && hy > 0)) throw std::invalid_argument("mesh sizes must be positive");
  if (!(dt_f > 0 && dt_s > 0 && T > 0)) throw std::invalid_argument("time steps and T must be positive");
  slab_count(T, dt_f);
  slab_count(T, dt_s);
  if (alpha_f < 0 || alpha_s < 0) throw std::invalid_argument("alpha_f and alpha_s must be nonnegative");
  if (method != Method::sp && !(alpha_f + alpha_s > 0)) {
    throw std::invalid_argument("Robin methods need alpha_f + alpha_s > 0");
  }
  if (!(tol > 0) || maxit < 1) throw std::invalid_argument("need tol > 0 and maxit >= 1");
}

RunConfig hemo_defaults() {
  RunConfig c;
  c.case_name = "hemo";
  c.method = Method::sp;
  c.elements = ElementSet::mini_p1;
  c.dt_f = 2e-4;
  c.dt_s = 1e-4;
  c.T = 0.1;
  return c;
}

namespace {

double parse_number(const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
      return v;
    }
    const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    std::size_t u1 = 0, u2 = 0;
    const double a = std::stod(num, &u1), b = std::stod(den, &u2);
    if (u1 != num.size() || u2 != den.size() || b == 0.0) throw std::invalid_argument("bad fraction");
    return a / b;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + text + "'");
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "case") c.case_name = value;
  else if (key == "method") c.method = parse_method(value);
  else if (key == "elements") c.elements = parse_element_set(value);
  else if (key == "h") c.h = parse_number(key, value);
  else if (key == "hx") c.hx = parse_number(key, value);
  else if (key == "hy") c.hy = parse_number(key, value);
  else if (key == "dt_f") c.dt_f = parse_number(key, value);
  else if (key == "dt_s") c.dt_s = parse_number(key, value);
  else if (key == "T") c.T = parse_number(key, value);
  else if (key == "alpha_f") c.alpha_f = parse_number(key, value);
  else if (key == "alpha_s") c.alpha_s = parse_number(key, value);
  else if (key == "tol") c.tol = parse_number(key, value);
  else if (key == "maxit") {
    const double v = parse_number(key, value);
    if (v != std::floor(v) || v < 1) throw std::invalid_argument("config: maxit must be a positive integer");
    c.maxit = static_cast<int>(v);
  } else if (key == "output_dir") c.output_dir = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string format_config(const RunConfig& c) {
  auto exact = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream o;
  o << "case=" << c.case_name << "\n"
    << "method=" << to_string(c.method) << "\n"
    << "elements=" << to_string(c.elements) << "\n"
    << "h=" << exact(c.h) << "\n"
    << "hx=" << exact(c.hx) << "\n"
    << "hy=" << exact(c.hy) << "\n"
    << "dt_f=" << exact(c.dt_f) << "\n"
    << "dt_s=" << exact(c.dt_s) << "\n"
    << "T=" << exact(c.T) << "\n"
    << "alpha_f=" << exact(c.alpha_f) << "\n"
    << "alpha_s=" << exact(c.alpha_s) << "\n"
    << "tol=" << exact(c.tol) << "\n"
    << "maxit=" << c.maxit << "\n"
    << "output_dir=" << c.output_dir << "\n";
  return o.str();
}

int cell_count(double length, double h, const char* what) {
  const double r = length / h;
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * r) {
    std::ostringstream msg;
    msg << what << ": " << h << " does not divide " << length;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(n);
}

// ---------------------------------------------------------------------------

namespace {

std::pair<ElementKind, ElementKind> kinds(ElementSet e) {
  return e == ElementSet::taylor_hood_p2 ? std::pair{ElementKind::P2, ElementKind::P2}
                                         : std::pair{ElementKind::P1_bubble, ElementKind::P1};
}

int vertex_at(const Mesh& m, double x, double y) {
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (std::abs(m.vertices[v].x - x) < 1e-12 && std::abs(m.vertices[v].y - y) < 1e-12) return v;
  }
  throw std::logic_error("vertex_at: no vertex at requested point");
}

}  // namespace

CoupledProblem make_mms_problem(ElementSet elements, int n, const MaterialParams& params,
                                std::shared_ptr<const TimeGrid> grid_f, std::shared_ptr<const TimeGrid> grid_s) {
  const auto fm = std::make_shared<const Mesh>(build_structured_mesh(
      {0, 0, 1, 1}, n, n,
      {{Side::bottom, BoundaryTag::gamma_f}, {Side::right, BoundaryTag::gamma_f},
       {Side::top, BoundaryTag::interface}, {Side::left, BoundaryTag::gamma_f}}));
  const auto sm = std::make_shared<const Mesh>(build_structured_mesh(
      {0, 1, 1, 2}, n, n,
      {{Side::bottom, BoundaryTag::interface}, {Side::right, BoundaryTag::gamma_s},
       {Side::top, BoundaryTag::gamma_s}, {Side::left, BoundaryTag::gamma_s}}));
  const auto [vk, sk] = kinds(elements);
  const MmsFields f = mms_fields(params);

  CoupledProblem p;
  p.params = params;
  p.fluid = {std::make_shared<const FeSpace>(fm, vk, 2), std::make_shared<const FeSpace>(fm, ElementKind::P1, 1),
             {BoundaryTag::gamma_f}, {}};
  p.structure = {std::make_shared<const FeSpace>(sm, sk, 2), {BoundaryTag::gamma_s}};
  p.grid_f = std::move(grid_f);
  p.grid_s = std::move(grid_s);
  p.fluid_source = {f.f_f, f.u, {}, f.u};
  p.structure_source = {f.f_s, f.eta, f.eta, f.eta_dot};
  return p;
}

MaterialParams hemo_params() {
  MaterialParams p;
  p.rho_f = 1.0;
  p.nu_f = 0.035;
  p.rho_s = 1.1;
  std::tie(p.nu_s, p.lambda) = lame_from_young(3e6, 0.3);
  return p;
}

Eigen::Vector2d inlet_traction(double t) {
  if (t > 0.025) return Eigen::Vector2d::Zero();
  return {-1e3 * (1.0 - std::cos(2.0 * M_PI * t / 0.025)), 0.0};
}

CoupledProblem make_hemo_problem(ElementSet elements, int nx, int ny_f, int ny_s,
                                 std::shared_ptr<const TimeGrid> grid_f, std::shared_ptr<const TimeGrid> grid_s) {
  const auto fm = std::make_shared<const Mesh>(build_structured_mesh(
      {0, 0, 6, 1}, nx, ny_f,
      {{Side::bottom, BoundaryTag::bottom}, {Side::right, BoundaryTag::outlet},
       {Side::top, BoundaryTag::interface}, {Side::left, BoundaryTag::inlet}}));
  const auto sm = std::make_shared<const Mesh>(build_structured_mesh(
      {0, 1, 6, 1.1}, nx, ny_s,
      {{Side::bottom, BoundaryTag::interface}, {Side::right, BoundaryTag::gamma_s},
       {Side::top, BoundaryTag::top}, {Side::left, BoundaryTag::gamma_s}}));
  const auto [vk, sk] = kinds(elements);

  CoupledProblem p;
  p.params = hemo_params();
  // the wall is clamped at both ends of Γ, so the fluid velocity is pinned there too
  p.fluid = {std::make_shared<const FeSpace>(fm, vk, 2), std::make_shared<const FeSpace>(fm, ElementKind::P1, 1),
             {BoundaryTag::bottom}, {vertex_at(*fm, 0.0, 1.0), vertex_at(*fm, 6.0, 1.0)}};
  p.structure = {std::make_shared<const FeSpace>(sm, sk, 2), {BoundaryTag::gamma_s}};
  p.grid_f = std::move(grid_f);
  p.grid_s = std::move(grid_s);
  p.fluid_source.tractions = {{BoundaryTag::inlet, [](const Point&, double t) { return inlet_traction(t); }}};
  return p;
}

// ---------------------------------------------------------------------------

CoupledRun run_coupled(const CoupledProblem& problem, const SubdomainForms& forms, Method method, double tol,
                       int maxit, bool keep_history, const SweepObservers& observers) {
  CoupledRun out;
  const auto start = std::chrono::steady_clock::now();
  if (method == Method::sp) {
    const SpInterface sp(problem, forms);
    out.solve = solve_interface(sp, tol, maxit);
    out.solution = sp.finalize(out.solve.z, keep_history, observers);
    out.iface_err_projected = interface_velocity_error(sp.sweeps(), out.solution, true);
    out.iface_err_pointwise = interface_velocity_error(sp.sweeps(), out.solution, false);
  } else {
    const RobinInterface robin(problem, forms);
    out.solve = solve_interface(robin, method, tol, maxit);
    out.solution = robin.finalize(out.solve.z, keep_history, observers);
    out.iface_err_projected = interface_velocity_error(robin.sweeps(), out.solution, true);
    out.iface_err_pointwise = interface_velocity_error(robin.sweeps(), out.solution, false);
  }
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace {

ErrorReport base_report(const RunConfig& c, double h) {
  ErrorReport r;
  r.h = h;
  r.dt_f = c.dt_f;
  r.dt_s = c.dt_s;
  r.method = c.method;
  r.alpha_f = c.alpha_f;
  r.alpha_s = c.alpha_s;
  return r;
}

void fill_solver_stats(ErrorReport& r, const CoupledRun& run) {
  r.iters = run.solve.iterations;
  r.converged = run.solve.converged;
  r.wall_s = run.wall_s;
  if (run.solve.method == Method::robin_swr) {
    r.residuals = run.solve.swr.updates;
    r.energy = run.solve.swr.energy;
  } else {
    r.residuals = run.solve.krylov.residuals;
  }
}

MaterialParams mms_params(const RunConfig& c) {
  MaterialParams p;  // densities, viscosities and Lame constants are 1
  p.alpha_f = c.alpha_f;
  p.alpha_s = c.alpha_s;
  return p;
}

}  // namespace

ErrorReport run_mms(const RunConfig& config) {
  config.validate();
  const int n = cell_count(1.0, config.h, "h");
  const MaterialParams params = mms_params(config);
  const auto gf = std::make_shared<const TimeGrid>(make_uniform_grid(config.T, slab_count(config.T, config.dt_f)));
  const auto gs = std::make_shared<const TimeGrid>(make_uniform_grid(config.T, slab_count(config.T, config.dt_s)));
  const CoupledProblem problem = make_mms_problem(config.elements, n, params, gf, gs);
  const SubdomainForms forms = assemble_forms(problem);
  const CoupledRun run = run_coupled(problem, forms, config.method, config.tol, config.maxit);

  ErrorReport r = base_report(config, 1.0 / n);
  fill_solver_stats(r, run);
  const MmsFields f = mms_fields(params);
  const double T = config.T;
  r.err_u_L2 = error_norm(*problem.fluid.velocity, run.solution.fluid.last.u, f.u_exact, T, Norm::L2);
  r.err_u_H1 = error_norm(*problem.fluid.velocity, run.solution.fluid.last.u, f.u_exact, T, Norm::H1_semi);
  r.err_p_L2 = error_norm(*problem.fluid.pressure, run.solution.fluid.last.p, f.p_exact, T, Norm::L2);
  r.err_eta_L2 = error_norm(*problem.structure.displacement, run.solution.structure.last.eta, f.eta_exact, T, Norm::L2);
  r.err_eta_H1 =
      error_norm(*problem.structure.displacement, run.solution.structure.last.eta, f.eta_exact, T, Norm::H1_semi);
  r.iface_err = run.iface_err_projected;
  return r;
}

namespace {

std::array<double, 5> errors_of(const ErrorReport& r) {
  return {r.err_u_L2, r.err_u_H1, r.err_p_L2, r.err_eta_L2, r.err_eta_H1};
}

std::array<double, 5> rates_between(const ErrorReport& coarse, const ErrorReport& fine) {
  const auto a = errors_of(coarse), b = errors_of(fine);
  std::array<double, 5> r{};
  for (int i = 0; i < 5; ++i) r[i] = std::log2(a[i] / b[i]);
  return r;
}

}  // namespace

std::vector<StudyRow> run_convergence_study(const RunConfig& config, StudyAxis axis, int levels) {
  if (levels < 2) throw std::invalid_argument("run_convergence_study: need at least two levels");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<StudyRow> rows;
  if (axis == StudyAxis::space) {
    RunConfig c = config;
    for (int l = 0; l < levels; ++l) {
      StudyRow row{l, "space", run_mms(c), {nan, nan, nan, nan, nan}};
      if (l > 0) row.rates = rates_between(rows.back().report, row.report);
      rows.push_back(std::move(row));
      c.h /= 2.0;
    }
    return rows;
  }
  const char* names[3] = {"coarse", "fine", "nonconforming"};
  std::array<const StudyRow*, 3> prev{};
  std::vector<StudyRow> out;
  out.reserve(static_cast<std::size_t>(3 * levels));
  double dt = config.dt_f;
  for (int l = 0; l < levels; ++l) {
    const std::array<std::pair<double, double>, 3> grids{{{dt, dt}, {dt / 2, dt / 2}, {dt, dt / 2}}};
    for (int g = 0; g < 3; ++g) {
      RunConfig c = config;
      c.dt_f = grids[g].first;
      c.dt_s = grids[g].second;
      StudyRow row{l, names[g], run_mms(c), {nan, nan, nan, nan, nan}};
      if (prev[g]) row.rates = rates_between(prev[g]->report, row.report);
      out.push_back(std::move(row));
      prev[g] = &out.back();
    }
    dt /= 2.0;
  }
  return out;
}

HemoResult run_hemodynamics(const RunConfig& config) {
  config.validate();
  const int nx = cell_count(6.0, config.hx, "hx");
  const int ny_f = cell_count(1.0, config.hy, "hy");
  const int ny_s = cell_count(0.1, config.hy, "hy");
  const auto gf = std::make_shared<const TimeGrid>(make_uniform_grid(config.T, slab_count(config.T, config.dt_f)));
  const auto gs = std::make_shared<const TimeGrid>(make_uniform_grid(config.T, slab_count(config.T, config.dt_s)));
  CoupledProblem problem = make_hemo_problem(config.elements, nx, ny_f, ny_s, gf, gs);
  problem.params.alpha_f = config.alpha_f;
  problem.params.alpha_s = config.alpha_s;
  const SubdomainForms forms = assemble_forms(problem);

  HemoResult out;
  const FeSpace& space = *problem.structure.displacement;
  out.displacement.push_back({0.0, 0.0, 0.0, 0.0});
  SweepObservers obs;
  obs.structure = [&](int n, const StructureState& s) {
    std::array<double, 4> row{gs->t(n), 0, 0, 0};
    for (int k = 0; k < 3; ++k) row[k + 1] = evaluate(space, s.eta, {kMonitorX[k], 1.0})(1);
    out.displacement.push_back(row);
  };
  const CoupledRun run = run_coupled(problem, forms, config.method, config.tol, config.maxit, false, obs);
  out.report = base_report(config, config.hy);
  fill_solver_stats(out.report, run);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.report.err_u_L2 = out.report.err_u_H1 = out.report.err_p_L2 = nan;
  out.report.err_eta_L2 = out.report.err_eta_H1 = nan;
  out.report.iface_err = run.iface_err_pointwise;
  out.iface_err_projected = run.iface_err_projected;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::ofstream open_csv(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_error_fields(std::ostream& o, const ErrorReport& r) {
  o << format_double(r.err_u_L2) << ',' << format_double(r.err_u_H1) << ',' << format_double(r.err_p_L2) << ','
    << format_double(r.err_eta_L2) << ',' << format_double(r.err_eta_H1);
}

}  // namespace

void write_errors_csv(const std::string& path, const std::vector<ErrorReport>& rows) {
  auto o = open_csv(path);
  o << "h,dt_f,dt_s,method,alpha_f,alpha_s,err_u_L2,err_u_H1,err_p_L2,err_eta_L2,err_eta_H1,iters,wall_s,iface_err\n";
  for (const auto& r : rows) {
    o << format_double(r.h) << ',' << format_double(r.dt_f) << ',' << format_double(r.dt_s) << ','
      << to_string(r.method) << ',' << format_double(r.alpha_f) << ',' << format_double(r.alpha_s) << ',';
    write_error_fields(o, r);
    o << ',' << r.iters << ',' << format_double(r.wall_s) << ',' << format_double(r.iface_err) << '\n';
  }
}

void write_displacement_csv(const std::string& path, const std::vector<std::array<double, 4>>& rows) {
  auto o = open_csv(path);
  o << "t,x1_disp,x2_disp,x3_disp\n";
  for (const auto& r : rows) {
    o << format_double(r[0]) << ',' << format_double(r[1]) << ',' << format_double(r[2]) << ','
      << format_double(r[3]) << '\n';
  }
}

void write_residuals_csv(const std::string& path, const ErrorReport& report) {
  auto o = open_csv(path);
  o << "iteration,residual,energy\n";
  const bool swr = report.method == Method::robin_swr;
  for (std::size_t k = 0; k < report.residuals.size(); ++k) {
    // GMRES histories start at k = 0; SWR updates at k = 1 with B^k from k = 2
    const std::size_t it = swr ? k + 1 : k;
    o << it << ',' << format_double(report.residuals[k]) << ',';
    if (swr && k >= 1 && k - 1 < report.energy.size()) o << format_double(report.energy[k - 1]);
    o << '\n';
  }
}

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows) {
  auto o = open_csv(path);
  o << "level,grid,h,dt_f,dt_s,method,err_u_L2,err_u_H1,err_p_L2,err_eta_L2,err_eta_H1,"
       "rate_u_L2,rate_u_H1,rate_p_L2,rate_eta_L2,rate_eta_H1,iters,wall_s\n";
  for (const auto& row : rows) {
    const ErrorReport& r = row.report;
    o << row.level << ',' << row.grid << ',' << format_double(r.h) << ',' << format_double(r.dt_f) << ','
      << format_double(r.dt_s) << ',' << to_string(r.method) << ',';
    write_error_fields(o, r);
    for (double rate : row.rates) o << ',' << format_double(rate);
    o << ',' << r.iters << ',' << format_double(r.wall_s) << '\n';
  }
}

void write_config(const std::string& path, const RunConfig& config) {
  auto o = open_csv(path);
  o << format_config(config);
}

}  // namespace fsidd
