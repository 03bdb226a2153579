#ifndef OPUCLAB_PIPELINE_HPP
#define OPUCLAB_PIPELINE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opuclab/asymptotics.hpp"
#include "opuclab/cmv.hpp"
#include "opuclab/equilibrium.hpp"

namespace opuclab {

struct ExperimentConfig {
  std::vector<double> potential_coeffs;
  std::string potential_name;
  std::vector<int> n_ladder;
  int window = 5;
  unsigned precision_bits = 0;  // 0: max(128, 10 n) per run
  int kmax = 0;                 // 0: n + window + 8
  double epsilon1 = 0.3;
  int jobs = 1;
  std::string out_dir = "out";
  std::map<std::string, double> tolerances;

  Potential potential() const { return Potential(potential_coeffs, potential_name); }
  double tol(const std::string& name, double fallback) const;
  void validate() const;  // throws CONFIG_INVALID
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct StageResult {
  std::string name;
  bool ok = false;
  bool ran = false;
  std::string message;
  double seconds = 0;
  std::vector<std::string> files;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<StageResult> stages;
  bool all_ok = false;
};

// Timings live in the report struct but are excluded from the serialized
// report so that identical configs yield byte-identical files.
std::string report_to_json(const RunReport& rep, bool include_timings = false);

StageResult run_equilibrium_stage(const ExperimentConfig& cfg);
StageResult run_verblunsky_stage(const ExperimentConfig& cfg);
StageResult run_verify_string_stage(const ExperimentConfig& cfg);
StageResult run_asymptotics_stage(const ExperimentConfig& cfg);
StageResult run_compare_stage(const ExperimentConfig& cfg);

// Full pipeline; stage errors are captured per stage and the pipeline
// continues where dependencies permit.
RunReport run(const ExperimentConfig& cfg);

// Formatting helpers shared by the stages and the CLI (deterministic output).
std::string format_double(double x);
std::string csv_escape(const std::string& field);

}  // namespace opuclab

#endif
