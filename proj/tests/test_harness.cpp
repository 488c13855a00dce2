#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fsidd/harness.hpp"

using namespace fsidd;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("fsidd_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("config keys, fractions and validation") {
  RunConfig c;
  set_config_value(c, "h", "1/32");
  CHECK(c.h == doctest::Approx(1.0 / 32));
  set_config_value(c, "method", "robin_swr");
  CHECK(c.method == Method::robin_swr);
  set_config_value(c, "elements", "mini_p1");
  CHECK(c.elements == ElementSet::mini_p1);
  set_config_value(c, "maxit", "250");
  CHECK(c.maxit == 250);
  set_config_value(c, "case", "hemo");
  CHECK(c.case_name == "hemo");
  CHECK_THROWS_AS(set_config_value(c, "mesh", "4"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "h", "1/0"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "h", "0.1x"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "maxit", "2.5"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "elements", "p3"), std::invalid_argument);

  RunConfig ok;
  CHECK_NOTHROW(ok.validate());
  RunConfig bad = ok;
  bad.dt_f = 7e-5;  // does not divide T
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.alpha_s = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.method = Method::robin_gmres;
  bad.alpha_f = bad.alpha_s = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.case_name = "steady";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("config file round trip through format_config") {
  const auto dir = scratch_dir("config");
  RunConfig c = hemo_defaults();
  c.hy = 1.0 / 30;
  c.alpha_s = 3.0;
  c.output_dir = (dir / "out").string();
  {
    std::ofstream out(dir / "run.cfg");
    out << "# comment line\n" << format_config(c) << "  tol = 1e-9   # trailing comment\n";
  }
  RunConfig back;
  load_config_file(back, (dir / "run.cfg").string());
  CHECK(back.case_name == "hemo");
  CHECK(back.hy == c.hy);
  CHECK(back.alpha_s == 3.0);
  CHECK(back.tol == 1e-9);
  CHECK(back.elements == ElementSet::mini_p1);
  CHECK(back.output_dir == c.output_dir);
  CHECK(cell_count(0.1, back.hy, "hy") == 3);

  {
    std::ofstream out(dir / "bad.cfg");
    out << "h=0.25\nunknown_key=1\n";
  }
  CHECK_THROWS_AS(load_config_file(back, (dir / "bad.cfg").string()), std::invalid_argument);
  CHECK_THROWS_AS(load_config_file(back, (dir / "missing.cfg").string()), std::runtime_error);
}

TEST_CASE("cell counts") {
  CHECK(cell_count(6.0, 0.1, "hx") == 60);
  CHECK(cell_count(1.0, 1.0 / 30, "hy") == 30);
  CHECK(cell_count(0.1, 0.05, "hy") == 2);
  CHECK_THROWS_AS(cell_count(1.0, 0.3, "h"), std::invalid_argument);
}

TEST_CASE("hemodynamics parameters and inlet pulse") {
  const MaterialParams k = hemo_params();
  CHECK(k.lambda == doctest::Approx(0.3 * 3e6 / (0.4 * 1.3)));
  CHECK(k.lambda == doctest::Approx(1.7308e6).epsilon(1e-4));
  CHECK(k.nu_s == doctest::Approx(3e6 / 2.6));
  CHECK(k.rho_f == 1.0);
  CHECK(k.nu_f == 0.035);
  CHECK(k.rho_s == 1.1);
  CHECK(inlet_traction(0.0125)(0) == doctest::Approx(-2000.0));
  CHECK(inlet_traction(0.0125)(1) == 0.0);
  CHECK(inlet_traction(0.0)(0) == 0.0);
  CHECK(inlet_traction(0.03).isZero(0.0));
  const RunConfig c = hemo_defaults();
  CHECK(c.dt_f == 2e-4);
  CHECK(c.dt_s == 1e-4);
  CHECK(c.T == 0.1);
  CHECK(c.method == Method::sp);
  CHECK(kMonitorX[0] == 1.5);
  CHECK(kMonitorX[2] == 4.5);
}

TEST_CASE("hemodynamics geometry matches the channel and wall") {
  const auto g = std::make_shared<const TimeGrid>(make_uniform_grid(0.01, 2));
  const CoupledProblem p = make_hemo_problem(ElementSet::mini_p1, 12, 4, 2, g, g);
  const Mesh& fm = p.fluid.velocity->mesh();
  const Mesh& sm = p.structure.displacement->mesh();
  CHECK(fm.num_vertices() == 13 * 5);
  CHECK(sm.num_vertices() == 13 * 3);
  const SubdomainForms forms = assemble_forms(p);
  const SpInterface sp(p, forms);
  // interface ends clamped on both sides
  CHECK(sp.sweeps().trace_size() == 2 * 11);
  CHECK(sp.sweeps().fluid().trace_space().nodes().front().x == doctest::Approx(0.5));
}

TEST_CASE("csv writers use six significant digits and fixed headers") {
  const auto dir = scratch_dir("csv");
  ErrorReport r;
  r.h = 0.125;
  r.dt_f = 5e-5;
  r.dt_s = 2.5e-5;
  r.alpha_f = 1;
  r.alpha_s = 100;
  r.err_u_L2 = 1.0 / 3.0;
  r.iters = 12;
  r.residuals = {1.0, 0.5};
  write_errors_csv((dir / "errors.csv").string(), {r});
  const std::string e = read_file(dir / "errors.csv");
  CHECK(e.rfind("h,dt_f,dt_s,method,alpha_f,alpha_s,err_u_L2,err_u_H1,err_p_L2,err_eta_L2,err_eta_H1,iters,wall_s,"
                "iface_err\n",
                0) == 0);
  CHECK(e.find("1.25000e-01,5.00000e-05,2.50000e-05,sp,1.00000e+00,1.00000e+02,3.33333e-01,") != std::string::npos);
  CHECK(e.find(",12,") != std::string::npos);

  write_displacement_csv((dir / "d.csv").string(), {{0.0, 1.0, -2.0, 3.5e-7}});
  CHECK(read_file(dir / "d.csv") == "t,x1_disp,x2_disp,x3_disp\n0.00000e+00,1.00000e+00,-2.00000e+00,3.50000e-07\n");

  write_residuals_csv((dir / "r.csv").string(), r);
  CHECK(read_file(dir / "r.csv") == "iteration,residual,energy\n0,1.00000e+00,\n1,5.00000e-01,\n");

  r.method = Method::robin_swr;
  r.energy = {0.25};
  write_residuals_csv((dir / "s.csv").string(), r);
  CHECK(read_file(dir / "s.csv") == "iteration,residual,energy\n1,1.00000e+00,\n2,5.00000e-01,2.50000e-01\n");
}

TEST_CASE("manufactured run on a coarse mesh") {
  RunConfig c;
  c.h = 0.25;
  c.T = 5e-4;
  const ErrorReport r = run_mms(c);
  CHECK(r.converged);
  CHECK(r.iters > 0);
  CHECK(r.err_u_H1 > 0.0);
  CHECK(r.err_u_H1 < 5e-2);
  CHECK(r.err_eta_H1 < 5e-2);
  CHECK(r.wall_s >= 0.0);
  CHECK(r.iface_err >= 0.0);
  CHECK(r.h == 0.25);
}
