#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpfa/errors.hpp"
#include "tpfa/format.hpp"
#include "tpfa/study.hpp"

namespace {

int cmd_mesh_info(const std::string& path) {
  tpfa::AdmissibleMesh mesh = tpfa::read_any_mesh(path);
  std::cout << tpfa::mesh_info_text(mesh);
  return 0;
}

int cmd_study(const std::string& config_path) {
  tpfa::StudyConfig config =
      tpfa::study_config_from(tpfa::parse_config_file(config_path));
  tpfa::StudyResult res = tpfa::run_study(config);
  for (const tpfa::StudyCheck& c : res.checks)
    std::cout << "check." << c.name << " = " << (c.passed ? "pass" : "fail")
              << " (" << tpfa::format_full(c.value) << ")\n";
  std::cout << "output = " << config.output_dir << "\n";
  std::cout << "passed = " << (res.passed ? "true" : "false") << "\n";
  return res.passed ? 0 : 1;
}

int cmd_bench_singular(const std::string& mesh_dir,
                       const std::vector<int>& levels,
                       const std::string& out_file) {
  std::vector<tpfa::ErrorReport> rows =
      mesh_dir.empty() ? tpfa::bench_singular_generated(levels)
                       : tpfa::bench_singular_dir(mesh_dir);
  if (out_file.empty()) {
    tpfa::write_bench_csv(std::cout, rows);
  } else {
    std::ofstream out(out_file);
    if (!out) throw tpfa::ParseError("cannot write file: " + out_file);
    tpfa::write_bench_csv(out, rows);
  }
  return 0;
}

int cmd_transient(int n, double horizon, int steps, tpfa::CouplingMap phi,
                  const std::string& out_dir) {
  tpfa::TransientRunSummary run =
      tpfa::run_manufactured_transient(n, horizon, steps, phi);
  std::ostringstream steps_csv;
  steps_csv << "m,t,l2\n";
  double k = run.row.k;
  for (size_t m = 0; m < run.step_l2.size(); ++m)
    steps_csv << m << ',' << tpfa::format_full(m * k) << ','
              << tpfa::format_full(run.step_l2[m]) << "\n";
  std::ostringstream summary_csv;
  summary_csv << "h,k,delta,riesz,grad,max,zeta\n"
              << tpfa::format_full(run.row.h) << ','
              << tpfa::format_full(run.row.k) << ','
              << tpfa::format_full(run.row.delta.total) << ','
              << tpfa::format_full(run.row.delta.riesz_term) << ','
              << tpfa::format_full(run.row.delta.grad_term) << ','
              << tpfa::format_full(run.row.delta.max_term) << ','
              << tpfa::format_full(run.row.zeta) << "\n";
  if (out_dir.empty()) {
    std::cout << steps_csv.str() << summary_csv.str();
  } else {
    std::filesystem::create_directories(out_dir);
    std::ofstream steps_out(std::filesystem::path(out_dir) / "steps.csv");
    std::ofstream summary_out(std::filesystem::path(out_dir) / "summary.csv");
    if (!steps_out || !summary_out)
      throw tpfa::ParseError("cannot write into directory: " + out_dir);
    steps_out << steps_csv.str();
    summary_out << summary_csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-centered finite volume solver with a posteriori error"
               " functionals"};
  app.require_subcommand(1);

  std::string mesh_path;
  CLI::App* info = app.add_subcommand(
      "mesh-info", "Print mesh counts, size, regularity and admissibility");
  info->add_option("file", mesh_path, "mesh file")->required();

  std::string config_path;
  CLI::App* study = app.add_subcommand(
      "study", "Run a convergence study described by a config file");
  study->add_option("config", config_path, "study config file")->required();

  std::string bench_dir, bench_out;
  std::vector<int> bench_levels = {4, 8, 16, 32};
  CLI::App* bench = app.add_subcommand(
      "bench-singular", "Error table for the singular log-power benchmark");
  CLI::Option* opt_dir =
      bench->add_option("--meshes", bench_dir, "directory of mesh files");
  CLI::Option* opt_gen = bench->add_option(
      "--generate", bench_levels, "generated triangulation sizes");
  opt_dir->excludes(opt_gen);
  bench->add_option("--output", bench_out, "CSV output file (default stdout)");

  std::string tr_config, tr_out, tr_coupling = "zero";
  int tr_n = 16, tr_steps = 8;
  double tr_horizon = 1.0, tr_lambda = 0.5;
  CLI::App* tr = app.add_subcommand(
      "transient", "Manufactured heat run with space-time error functionals");
  tr->add_option("config", tr_config, "optional config file with defaults");
  CLI::Option* opt_n = tr->add_option("--n", tr_n, "square grid size");
  CLI::Option* opt_T = tr->add_option("--horizon", tr_horizon, "final time");
  CLI::Option* opt_N = tr->add_option("--steps", tr_steps, "time step count");
  CLI::Option* opt_phi =
      tr->add_option("--coupling", tr_coupling, "initial-state coupling kind")
          ->check(CLI::IsMember({"zero", "identity", "scaled"}));
  tr->add_option("--lambda", tr_lambda, "scale of the scaled coupling");
  tr->add_option("--output", tr_out, "directory for steps.csv + summary.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (info->parsed()) return cmd_mesh_info(mesh_path);
    if (study->parsed()) return cmd_study(config_path);
    if (bench->parsed())
      return cmd_bench_singular(bench_dir, bench_levels, bench_out);
    if (tr->parsed()) {
      if (!tr_config.empty()) {
        tpfa::ConfigMap cfg = tpfa::parse_config_file(tr_config);
        if (opt_n->count() == 0) {
          std::vector<std::string> levels = cfg.get_list("mesh.levels");
          if (!levels.empty()) tr_n = std::stoi(levels.front());
        }
        if (opt_T->count() == 0)
          tr_horizon = cfg.get_double("transient.horizon", tr_horizon);
        if (opt_N->count() == 0) {
          std::vector<std::string> steps = cfg.get_list("transient.steps");
          if (!steps.empty()) tr_steps = std::stoi(steps.front());
        }
        if (opt_phi->count() == 0)
          tr_coupling = cfg.get("transient.coupling", tr_coupling);
        tr_lambda = cfg.get_double("transient.lambda", tr_lambda);
      }
      tpfa::CouplingMap phi = tr_coupling == "identity"
                                  ? tpfa::coupling_identity()
                              : tr_coupling == "scaled"
                                  ? tpfa::coupling_scaled(tr_lambda)
                                  : tpfa::coupling_zero();
      return cmd_transient(tr_n, tr_horizon, tr_steps, phi, tr_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
