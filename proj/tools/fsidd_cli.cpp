#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsidd/harness.hpp"
#include "fsidd/verify.hpp"

namespace {

using namespace fsidd;

const std::vector<std::string> kConfigKeys = {"method", "elements", "h",       "hx",  "hy",    "dt_f",      "dt_s",
                                              "T",      "alpha_f",  "alpha_s", "tol", "maxit", "output_dir"};

struct Flags {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_config_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "flat key=value file with RunConfig keys")->check(CLI::ExistingFile);
  for (const auto& key : kConfigKeys) cmd->add_option("--" + key, flags.values[key]);
}

RunConfig resolve(const CLI::App* cmd, const Flags& flags, RunConfig base, const std::string& case_name) {
  base.case_name = case_name;
  if (!flags.config_path.empty()) load_config_file(base, flags.config_path);
  if (base.case_name != case_name) {
    throw std::invalid_argument("config file sets case=" + base.case_name + " but the subcommand is " + case_name);
  }
  for (const auto& key : kConfigKeys) {
    if (cmd->count("--" + key) > 0) set_config_value(base, key, flags.values.at(key));
  }
  base.validate();
  return base;
}

std::string out_path(const RunConfig& c, const char* name) {
  return (std::filesystem::path(c.output_dir) / name).string();
}

void print_report(const ErrorReport& r) {
  std::printf("method=%s iters=%d converged=%s wall_s=%s\n", to_string(r.method), r.iters, r.converged ? "yes" : "no",
              format_double(r.wall_s).c_str());
  std::printf("err_u_L2=%s err_u_H1=%s err_p_L2=%s err_eta_L2=%s err_eta_H1=%s iface_err=%s\n",
              format_double(r.err_u_L2).c_str(), format_double(r.err_u_H1).c_str(),
              format_double(r.err_p_L2).c_str(), format_double(r.err_eta_L2).c_str(),
              format_double(r.err_eta_H1).c_str(), format_double(r.iface_err).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global-in-time domain decomposition for Stokes flow coupled to linear elastodynamics"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  Flags mms_flags, hemo_flags, study_flags, verify_flags;
  auto* mms = app.add_subcommand("mms", "manufactured-solution run; writes errors.csv, residuals.csv, config.txt");
  add_config_flags(mms, mms_flags);
  auto* hemo = app.add_subcommand("hemo", "channel flow under an elastic wall; adds displacement.csv");
  add_config_flags(hemo, hemo_flags);
  auto* study = app.add_subcommand("study", "convergence study in h or dt; writes study.csv and errors.csv");
  add_config_flags(study, study_flags);
  std::string axis = "space";
  int levels = 4;
  study->add_option("--axis", axis, "space | time")->check(CLI::IsMember({"space", "time"}));
  study->add_option("--levels", levels, "number of refinement levels")->check(CLI::Range(2, 12));
  auto* verify = app.add_subcommand("verify", "dense-oracle and property checks; nonzero exit on failure");
  add_config_flags(verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mms->parsed()) {
      const RunConfig c = resolve(mms, mms_flags, RunConfig{}, "mms");
      const ErrorReport r = run_mms(c);
      write_errors_csv(out_path(c, "errors.csv"), {r});
      write_residuals_csv(out_path(c, "residuals.csv"), r);
      write_config(out_path(c, "config.txt"), c);
      print_report(r);
      return r.converged ? 0 : 2;
    }
    if (hemo->parsed()) {
      const RunConfig c = resolve(hemo, hemo_flags, hemo_defaults(), "hemo");
      const HemoResult r = run_hemodynamics(c);
      write_errors_csv(out_path(c, "errors.csv"), {r.report});
      write_displacement_csv(out_path(c, "displacement.csv"), r.displacement);
      write_residuals_csv(out_path(c, "residuals.csv"), r.report);
      write_config(out_path(c, "config.txt"), c);
      print_report(r.report);
      std::printf("iface_err at the last slabs of both grids=%s, after projection to the fluid grid=%s\n",
                  format_double(r.report.iface_err).c_str(), format_double(r.iface_err_projected).c_str());
      return r.report.converged ? 0 : 2;
    }
    if (study->parsed()) {
      const RunConfig c = resolve(study, study_flags, RunConfig{}, "mms");
      const auto rows = run_convergence_study(c, axis == "time" ? StudyAxis::time : StudyAxis::space, levels);
      std::vector<ErrorReport> reports;
      for (const auto& row : rows) reports.push_back(row.report);
      write_study_csv(out_path(c, "study.csv"), rows);
      write_errors_csv(out_path(c, "errors.csv"), reports);
      write_config(out_path(c, "config.txt"), c);
      for (const auto& row : rows) {
        std::printf("level %d %-13s h=%s dt_f=%s dt_s=%s u_H1=%s p_L2=%s eta_H1=%s rates(u_H1,p_L2,eta_H1)=%s,%s,%s\n",
                    row.level, row.grid.c_str(), format_double(row.report.h).c_str(),
                    format_double(row.report.dt_f).c_str(), format_double(row.report.dt_s).c_str(),
                    format_double(row.report.err_u_H1).c_str(), format_double(row.report.err_p_L2).c_str(),
                    format_double(row.report.err_eta_H1).c_str(), format_double(row.rates[1]).c_str(),
                    format_double(row.rates[2]).c_str(), format_double(row.rates[4]).c_str());
      }
      return 0;
    }
    if (verify->parsed()) {
      const RunConfig c = resolve(verify, verify_flags, RunConfig{}, "verify");
      const VerificationReport r = run_verification(c);
      for (const auto& check : r.checks) {
        std::printf("[%s] %-60s %s (bound %s)\n", check.passed ? "PASS" : "FAIL", check.name.c_str(),
                    format_double(check.value).c_str(), format_double(check.threshold).c_str());
      }
      return r.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
