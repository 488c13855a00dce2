#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fsidd/interface.hpp"

namespace fsidd {

enum class ElementSet { taylor_hood_p2, mini_p1 };

const char* to_string(ElementSet elements);
ElementSet parse_element_set(const std::string& name);

struct RunConfig {
  std::string case_name = "mms";  // mms | hemo | verify
  Method method = Method::sp;
  ElementSet elements = ElementSet::taylor_hood_p2;
  double h = 0.125;  // manufactured test, both subdomains
  double hx = 0.1;   // hemodynamics
  double hy = 0.1;
  double dt_f = 5e-5;
  double dt_s = 2.5e-5;
  double T = 0.0025;
  double alpha_f = 1.0;
  double alpha_s = 100.0;
  double tol = 1e-7;
  int maxit = 500;
  std::string output_dir = ".";

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

/// Defaults of the hemodynamics experiment (MINI/P1, SP, T = 0.1).
RunConfig hemo_defaults();

/// Sets one key (the RunConfig field names, `case` for case_name). Numbers
/// accept fractions such as 1/32.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
/// Flat key=value file; '#' starts a comment. Unknown keys are rejected.
void load_config_file(RunConfig& config, const std::string& path);
/// key=value lines that load_config_file reads back exactly.
std::string format_config(const RunConfig& config);

/// Number of cells of size h in length L; throws unless h divides L.
int cell_count(double length, double h, const char* what);

CoupledProblem make_mms_problem(ElementSet elements, int n, const MaterialParams& params,
                                std::shared_ptr<const TimeGrid> grid_f, std::shared_ptr<const TimeGrid> grid_s);

/// Channel [0,6]x[0,1] under the wall [0,6]x[1,1.1] with the inlet pressure pulse.
CoupledProblem make_hemo_problem(ElementSet elements, int nx, int ny_f, int ny_s,
                                 std::shared_ptr<const TimeGrid> grid_f, std::shared_ptr<const TimeGrid> grid_s);

MaterialParams hemo_params();
/// Inlet traction b(t).
Eigen::Vector2d inlet_traction(double t);

struct ErrorReport {
  double h = 0.0;
  double dt_f = 0.0;
  double dt_s = 0.0;
  Method method = Method::sp;
  double alpha_f = 0.0;
  double alpha_s = 0.0;
  double err_u_L2 = 0.0;
  double err_u_H1 = 0.0;
  double err_p_L2 = 0.0;
  double err_eta_L2 = 0.0;
  double err_eta_H1 = 0.0;
  int iters = 0;
  bool converged = false;
  double wall_s = 0.0;
  double iface_err = 0.0;
  std::vector<double> residuals;  // GMRES relative residuals or SWR updates
  std::vector<double> energy;     // SWR only
};

/// Runs the chosen method on a coupled problem and returns the solved
/// interface data together with the final fields.
struct CoupledRun {
  InterfaceSolve solve;
  CoupledSolution solution;
  double iface_err_projected = 0.0;
  double iface_err_pointwise = 0.0;
  double wall_s = 0.0;
};

CoupledRun run_coupled(const CoupledProblem& problem, const SubdomainForms& forms, Method method, double tol,
                       int maxit, bool keep_history = false, const SweepObservers& observers = {});

ErrorReport run_mms(const RunConfig& config);

enum class StudyAxis { space, time };

struct StudyRow {
  int level = 0;
  std::string grid;  // space | coarse | fine | nonconforming
  ErrorReport report;
  std::array<double, 5> rates{};  // u L2, u H1, p L2, eta L2, eta H1; NaN on the first level
};

/// Space: h halved `levels - 1` times from config.h. Time: dt_coarse =
/// config.dt_f halved likewise, each level run on coarse, fine and
/// nonconforming grids.
std::vector<StudyRow> run_convergence_study(const RunConfig& config, StudyAxis axis, int levels);

struct HemoResult {
  ErrorReport report;  // iface_err compares the last slab values of both grids
  double iface_err_projected = 0.0;
  std::vector<std::array<double, 4>> displacement;  // t, vertical displacement at x = 1.5, 3, 4.5
};

HemoResult run_hemodynamics(const RunConfig& config);

extern const std::array<double, 3> kMonitorX;

// CSV output, floats as %.5e.
void write_errors_csv(const std::string& path, const std::vector<ErrorReport>& rows);
void write_displacement_csv(const std::string& path, const std::vector<std::array<double, 4>>& rows);
void write_residuals_csv(const std::string& path, const ErrorReport& report);
void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows);
void write_config(const std::string& path, const RunConfig& config);

std::string format_double(double v);

}  // namespace fsidd
