#ifndef TPFA_STUDY_HPP
#define TPFA_STUDY_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tpfa/analysis.hpp"
#include "tpfa/transient.hpp"

namespace tpfa {

/// Flat `key = value` configuration with `[section]` headers and # comments.
struct ConfigMap {
  std::map<std::string, std::string> entries;  // keyed as "section.key"

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  /// Comma- or whitespace-separated list value.
  std::vector<std::string> get_list(const std::string& key) const;
};

ConfigMap parse_config(std::istream& in);
ConfigMap parse_config_file(const std::string& path);

enum class StudyProblem { Singular, ManufacturedH2, TransientManufactured };

/// Everything a convergence-study run needs, resolved to concrete values.
struct StudyConfig {
  StudyProblem problem = StudyProblem::Singular;
  std::string family = "triangular";  // triangular | square
  std::vector<int> levels = {4, 8, 16, 32};
  std::vector<std::string> mesh_files;  // overrides the generator when set
  std::string output_dir = "study-out";
  double order_min = 0.85;
  double horizon = 1.0;          // transient levels
  std::vector<int> steps;        // slab counts, paired with levels
  CouplingMap coupling = coupling_zero();
  unsigned seed = 42;
};

StudyConfig study_config_from(const ConfigMap& cfg);

/// One named assertion evaluated by a study, with its diagnostic value.
struct StudyCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
};

/// Per-level record of a transient refinement study.
struct TransientStudyRow {
  double h = 0.0;
  double k = 0.0;
  DeltaTimeBreakdown delta;
  double zeta = 0.0;
};

struct StudyResult {
  std::vector<ErrorReport> rows;               // steady problems
  std::vector<TransientStudyRow> transient_rows;
  std::vector<StudyCheck> checks;
  bool passed = true;
};

/// Runs the configured study, writing report.csv, orders.txt, summary.txt and
/// plot.dat into the output directory (CSV flushed after every level).
StudyResult run_study(const StudyConfig& config);

/// Human-readable mesh summary: counts, mesh size, regularity, admissibility.
std::string mesh_info_text(const AdmissibleMesh& mesh);

/// Reads a mesh file in the native format, falling back to the benchmark
/// triangle format if the native parse fails.
AdmissibleMesh read_any_mesh(const std::string& path);

/// Singular benchmark on generated acute triangulations with the given sizes.
std::vector<ErrorReport> bench_singular_generated(const std::vector<int>& levels);

/// Singular benchmark on every mesh file in a directory (sorted by name).
std::vector<ErrorReport> bench_singular_dir(const std::string& dir);

void write_bench_csv(std::ostream& out, const std::vector<ErrorReport>& rows);

/// One manufactured-heat solve with its error functionals and step norms.
struct TransientRunSummary {
  TransientStudyRow row;
  std::vector<double> step_l2;  // N+1 entries, including the initial state
};

TransientRunSummary run_manufactured_transient(int n, double horizon, int steps,
                                               CouplingMap phi);

}  // namespace tpfa

#endif
