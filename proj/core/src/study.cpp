#include "tpfa/study.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tpfa/errors.hpp"
#include "tpfa/format.hpp"
#include "tpfa/singular.hpp"

namespace tpfa {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool ConfigMap::has(const std::string& key) const {
  return entries.count(key) != 0;
}

std::string ConfigMap::get(const std::string& key,
                           const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  try {
    size_t used = 0;
    double v = std::stod(it->second, &used);
    if (trim(it->second.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("config value for '" + key + "' is not a number: " +
                   it->second);
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  try {
    size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (trim(it->second.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("config value for '" + key + "' is not an integer: " +
                   it->second);
}

std::vector<std::string> ConfigMap::get_list(const std::string& key) const {
  std::vector<std::string> out;
  auto it = entries.find(key);
  if (it == entries.end()) return out;
  std::string item;
  for (char ch : it->second + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(ch);
    }
  }
  return out;
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) +
                         ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError("config line " + std::to_string(lineno) +
                         ": empty section name");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(lineno) +
                       ": empty key");
    cfg.entries[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  return parse_config(in);
}

namespace {

std::vector<int> to_ints(const std::vector<std::string>& list,
                         const std::string& what) {
  std::vector<int> out;
  for (const std::string& s : list) {
    try {
      size_t used = 0;
      int v = std::stoi(s, &used);
      if (used == s.size() && v > 0) {
        out.push_back(v);
        continue;
      }
    } catch (const std::exception&) {
    }
    throw ParseError(what + " entry is not a positive integer: " + s);
  }
  return out;
}

}  // namespace

StudyConfig study_config_from(const ConfigMap& cfg) {
  StudyConfig out;
  std::string problem = cfg.get("study.problem", "singular");
  if (problem == "singular") {
    out.problem = StudyProblem::Singular;
    out.family = "triangular";
    out.levels = {4, 8, 16, 32};
    out.order_min = 0.85;
  } else if (problem == "manufactured-h2") {
    out.problem = StudyProblem::ManufacturedH2;
    out.family = "square";
    out.levels = {8, 16, 32, 64};
    out.order_min = 0.95;
  } else if (problem == "transient-manufactured") {
    out.problem = StudyProblem::TransientManufactured;
    out.family = "square";
    out.levels = {8, 16, 32};
    out.order_min = 0.9;
  } else {
    throw ParseError("unknown study problem: " + problem);
  }

  out.family = cfg.get("mesh.family", out.family);
  if (out.family != "triangular" && out.family != "square")
    throw ParseError("unknown mesh family: " + out.family);
  if (cfg.has("mesh.levels"))
    out.levels = to_ints(cfg.get_list("mesh.levels"), "mesh.levels");
  out.mesh_files = cfg.get_list("mesh.files");

  out.output_dir = cfg.get("study.output", "study-out");
  out.order_min = cfg.get_double("tolerances.order_min", out.order_min);
  out.seed = static_cast<unsigned>(cfg.get_int("study.seed", 42));

  out.horizon = cfg.get_double("transient.horizon", 1.0);
  if (!(out.horizon > 0.0)) throw ParseError("transient horizon must be > 0");
  out.steps = cfg.has("transient.steps")
                  ? to_ints(cfg.get_list("transient.steps"), "transient.steps")
                  : out.levels;
  std::string coupling = cfg.get("transient.coupling", "zero");
  if (coupling == "zero")
    out.coupling = coupling_zero();
  else if (coupling == "identity")
    out.coupling = coupling_identity();
  else if (coupling == "scaled")
    out.coupling = coupling_scaled(cfg.get_double("transient.lambda", 0.5));
  else
    throw ParseError("unknown coupling kind: " + coupling);

  size_t n_levels =
      out.mesh_files.empty() ? out.levels.size() : out.mesh_files.size();
  if (n_levels < 2)
    throw ParseError("a study needs at least two refinement levels");
  if (out.problem == StudyProblem::TransientManufactured &&
      out.steps.size() != out.levels.size())
    throw ParseError("transient.steps must pair one entry with each level");
  return out;
}

AdmissibleMesh read_any_mesh(const std::string& path) {
  try {
    return read_mesh_file(path);
  } catch (const ParseError&) {
    return read_fvca_triangles_file(path);
  }
}

std::string mesh_info_text(const AdmissibleMesh& mesh) {
  std::ostringstream os;
  os << mesh.n_cells() << " cells, " << mesh.n_vertices() << " vertices, "
     << mesh.n_faces() << (mesh.dim() == 2 ? " edges" : " faces") << "\n";
  MeshQuality q = mesh.quality();
  os << "h = " << format_full(q.h) << "\n";
  os << "theta = " << format_full(q.theta) << "\n";
  mesh.validate();
  os << "admissible: yes\n";
  return os.str();
}

std::vector<ErrorReport> bench_singular_generated(
    const std::vector<int>& levels) {
  ExactSolutionOracle oracle = singular_oracle();
  SteadyData data = singular_data();
  std::vector<ErrorReport> rows;
  for (int n : levels) {
    AdmissibleMesh mesh = generate_acute_triangular_grid(n);
    rows.push_back(full_report(mesh, oracle, data));
  }
  return rows;
}

std::vector<ErrorReport> bench_singular_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  if (!fs::is_directory(dir))
    throw ParseError("not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw ParseError("no mesh files in directory: " + dir);
  ExactSolutionOracle oracle = singular_oracle();
  SteadyData data = singular_data();
  std::vector<ErrorReport> rows;
  for (const std::string& p : paths) {
    AdmissibleMesh mesh = read_any_mesh(p);
    rows.push_back(full_report(mesh, oracle, data));
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<ErrorReport>& rows) {
  out << kBenchCsvHeader << "\n";
  for (const ErrorReport& r : rows) out << bench_csv_row(r) << "\n";
}

TransientRunSummary run_manufactured_transient(int n, double horizon, int steps,
                                               CouplingMap phi) {
  AdmissibleMesh mesh = generate_square_grid(n);
  TimeGrid grid{horizon, steps};
  TransientSetup setup = manufactured_heat(mesh);
  Eigen::VectorXd xi0 = manufactured_heat_xi0(mesh, grid, phi);
  TransientProblemData data =
      time_average_data(setup.data, mesh, grid, std::move(xi0), phi);
  SpaceTimeField u = solve_transient(data);

  TransientRunSummary out;
  out.row.h = mesh.quality().h;
  out.row.k = grid.dt();
  out.row.delta = delta_time(setup.bundle, u);
  TpfaOperator op0 = assemble_operator(mesh);
  out.row.zeta = zeta_time_slabs(
      op0, manufactured_conformity_slabs(mesh, setup.bundle, grid), grid);
  for (const DiscreteField& state : u.at)
    out.step_l2.push_back(cell_l2_norm(mesh, state.cell));
  return out;
}

namespace {

constexpr const char* kTransientCsvHeader = "h,k,delta,riesz,grad,max,zeta";

std::string transient_csv_row(const TransientStudyRow& r) {
  std::ostringstream os;
  os << format_full(r.h) << ',' << format_full(r.k) << ','
     << format_full(r.delta.total) << ',' << format_full(r.delta.riesz_term)
     << ',' << format_full(r.delta.grad_term) << ','
     << format_full(r.delta.max_term) << ',' << format_full(r.zeta);
  return os.str();
}

std::string commas_to_spaces(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  return s;
}

std::string problem_name(StudyProblem p) {
  switch (p) {
    case StudyProblem::Singular: return "singular";
    case StudyProblem::ManufacturedH2: return "manufactured-h2";
    default: return "transient-manufactured";
  }
}

/// Aggregate observed order over the last (up to) `window` rows.
template <class Rows, class GetH, class GetE>
double window_order(const Rows& rows, GetH h, GetE e, size_t window) {
  size_t count = std::min(window, rows.size());
  const auto& first = rows[rows.size() - count];
  const auto& last = rows.back();
  return observed_order(e(first), e(last), h(first), h(last));
}

struct CheckList {
  std::vector<StudyCheck>& checks;
  void add(const std::string& name, bool passed, double value) {
    checks.push_back({name, passed, value});
  }
};

}  // namespace

StudyResult run_study(const StudyConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  auto out_path = [&](const char* name) {
    return (fs::path(config.output_dir) / name).string();
  };

  StudyResult res;
  std::ofstream csv(out_path("report.csv"));
  std::ofstream plot(out_path("plot.dat"));
  if (!csv || !plot)
    throw ParseError("cannot write into output directory: " +
                     config.output_dir);

  bool transient = config.problem == StudyProblem::TransientManufactured;
  const char* header = transient ? kTransientCsvHeader : kErrorReportCsvHeader;
  csv << header << "\n" << std::flush;
  plot << "# " << commas_to_spaces(header) << "\n" << std::flush;

  if (transient) {
    for (size_t i = 0; i < config.levels.size(); ++i) {
      TransientRunSummary run = run_manufactured_transient(
          config.levels[i], config.horizon, config.steps[i], config.coupling);
      res.transient_rows.push_back(run.row);
      std::string row = transient_csv_row(run.row);
      csv << row << "\n" << std::flush;
      plot << commas_to_spaces(row) << "\n" << std::flush;
    }
  } else {
    ExactSolutionOracle oracle;
    SteadyData data;
    if (config.problem == StudyProblem::Singular) {
      oracle = singular_oracle();
      data = singular_data();
    } else {
      oracle = make_sin_sin();
      data = sin_sin_load();
    }
    auto emit = [&](const AdmissibleMesh& mesh) {
      ErrorReport r = full_report(mesh, oracle, data);
      res.rows.push_back(r);
      std::string row = error_report_csv_row(r);
      csv << row << "\n" << std::flush;
      plot << commas_to_spaces(row) << "\n" << std::flush;
    };
    if (!config.mesh_files.empty()) {
      for (const std::string& path : config.mesh_files)
        emit(read_any_mesh(path));
    } else {
      for (int n : config.levels)
        emit(config.family == "square" ? generate_square_grid(n)
                                       : generate_acute_triangular_grid(n));
    }
  }

  CheckList checks{res.checks};
  std::ofstream orders(out_path("orders.txt"));
  auto h_of = [](const ErrorReport& r) { return r.h; };

  if (config.problem == StudyProblem::Singular) {
    const auto& rows = res.rows;
    double min_drop = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < rows.size(); ++i)
      min_drop = std::min(min_drop, rows[i].delta - rows[i + 1].delta);
    checks.add("delta_decreasing", min_drop > 0.0, min_drop);
    double worst_ratio = 0.0;
    for (const ErrorReport& r : rows)
      worst_ratio = std::max(
          worst_ratio, r.delta / (3.0 * (r.conformity + r.interp_upper)));
    checks.add("delta_sandwich", worst_ratio <= 1.0, worst_ratio);
    double zmax = 0.0;
    for (const ErrorReport& r : rows) zmax = std::max(zmax, r.conformity);
    checks.add("zeta_small", zmax <= 1e-8, zmax);
    if (rows.size() >= 3) {
      double order = window_order(
          rows, h_of, [](const ErrorReport& r) { return r.l2; }, 3);
      checks.add("l2_order", order >= config.order_min, order);
    }
    for (size_t i = 0; i + 1 < rows.size(); ++i)
      orders << "order.l2." << i << " = "
             << format_full(observed_order(rows[i].l2, rows[i + 1].l2,
                                           rows[i].h, rows[i + 1].h))
             << "\n";
  } else if (config.problem == StudyProblem::ManufacturedH2) {
    const auto& rows = res.rows;
    double l2_order = window_order(
        rows, h_of, [](const ErrorReport& r) { return r.l2; }, 3);
    checks.add("l2_order", l2_order >= config.order_min, l2_order);
    double cg_order = window_order(
        rows, h_of, [](const ErrorReport& r) { return r.cgrad; }, 3);
    checks.add("cgrad_order", cg_order >= config.order_min, cg_order);
    const double pi = std::acos(-1.0);
    double h2_norm = std::sqrt(0.25 + pi * pi / 2.0 + pi * pi * pi * pi);
    double worst = 0.0;
    for (const ErrorReport& r : rows) {
      // oscillation cap (h / theta^{d/2}) * |u|_{H2}, d = 2, with 1% slack
      double cap = r.h / r.theta * h2_norm * 1.01;
      worst = std::max(worst, r.theta_osc / cap);
    }
    checks.add("theta_bound", worst <= 1.0, worst);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
      orders << "order.l2." << i << " = "
             << format_full(observed_order(rows[i].l2, rows[i + 1].l2,
                                           rows[i].h, rows[i + 1].h))
             << "\n";
      orders << "order.cgrad." << i << " = "
             << format_full(observed_order(rows[i].cgrad, rows[i + 1].cgrad,
                                           rows[i].h, rows[i + 1].h))
             << "\n";
    }
  } else {
    const auto& rows = res.transient_rows;
    double min_drop = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < rows.size(); ++i)
      min_drop =
          std::min(min_drop, rows[i].delta.total - rows[i + 1].delta.total);
    checks.add("delta_decreasing", min_drop > 0.0, min_drop);
    double worst = 0.0;
    for (const TransientStudyRow& r : rows)
      worst = std::max(worst, r.zeta / r.delta.total);
    checks.add("zeta_le_delta", worst <= 1.0, worst);
    double order = window_order(
        rows, [](const TransientStudyRow& r) { return r.k; },
        [](const TransientStudyRow& r) { return r.delta.total; }, 3);
    checks.add("combined_order", order >= config.order_min, order);
    for (size_t i = 0; i + 1 < rows.size(); ++i)
      orders << "order.delta." << i << " = "
             << format_full(observed_order(rows[i].delta.total,
                                           rows[i + 1].delta.total, rows[i].k,
                                           rows[i + 1].k))
             << "\n";
  }

  for (const StudyCheck& c : res.checks)
    if (!c.passed) res.passed = false;
  for (const StudyCheck& c : res.checks)
    orders << "check." << c.name << " = " << (c.passed ? "pass" : "fail")
           << "\n";

  std::ofstream summary(out_path("summary.txt"));
  summary << "problem = " << problem_name(config.problem) << "\n";
  if (config.mesh_files.empty()) {
    summary << "family = " << config.family << "\n";
    summary << "levels =";
    for (int n : config.levels) summary << ' ' << n;
    summary << "\n";
  } else {
    summary << "files =";
    for (const std::string& f : config.mesh_files) summary << ' ' << f;
    summary << "\n";
  }
  summary << "seed = " << config.seed << "\n";
  summary << "rows = "
          << (transient ? res.transient_rows.size() : res.rows.size()) << "\n";
  for (const StudyCheck& c : res.checks) {
    summary << "check." << c.name << " = " << (c.passed ? "pass" : "fail")
            << "\n";
    summary << "value." << c.name << " = " << format_full(c.value) << "\n";
  }
  summary << "passed = " << (res.passed ? "true" : "false") << "\n";
  return res;
}

}  // namespace tpfa
