#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opuclab/pipeline.hpp"

using namespace opuclab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::CONFIG_INVALID, "cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CommonFlags {
  std::string config_path;
  std::string potential_json;
  std::vector<int> n_list;
  int window = -1;
  unsigned precision = 0;
  std::string out_dir;
  int jobs = 0;
  int kmax = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config JSON file");
    cmd->add_option("--potential", potential_json,
                    R"(potential as JSON, e.g. {"coeffs":[-2],"name":"gww2"})");
    cmd->add_option("--n", n_list, "weight indices (ladder)")->delimiter(',');
    cmd->add_option("--window", window, "offset window half-width");
    cmd->add_option("--precision", precision, "working precision in bits (0 = auto)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--jobs", jobs, "worker count for independent n runs");
    cmd->add_option("--kmax", kmax, "highest coefficient index (0 = auto)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = config_from_json(slurp(config_path));
    if (!potential_json.empty()) {
      nlohmann::json pj;
      try {
        pj = nlohmann::json::parse(potential_json);
      } catch (const std::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("bad --potential: ") + e.what());
      }
      cfg.potential_coeffs = pj.at("coeffs").get<std::vector<double>>();
      cfg.potential_name = pj.value("name", "");
    }
    if (!n_list.empty()) cfg.n_ladder = n_list;
    if (window >= 0) cfg.window = window;
    if (precision) cfg.precision_bits = precision;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (jobs) cfg.jobs = jobs;
    if (kmax) cfg.kmax = kmax;
    cfg.validate();
    return cfg;
  }
};

int finish(const StageResult& res) {
  std::printf("[%s] %s (%.2fs)\n", res.ok ? "ok" : "FAIL", res.name.c_str(), res.seconds);
  if (!res.message.empty() && res.message != "ok") std::printf("  %s\n", res.message.c_str());
  for (const auto& f : res.files) std::printf("  wrote %s\n", f.c_str());
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verblunsky coefficients, equilibrium measures and CMV string-equation checks "
               "for weights e^{-nV(cos lambda)}"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string which;
  for (const char* name : {"equilibrium", "verblunsky", "verify-string", "asymptotics",
                           "compare", "report"}) {
    CLI::App* cmd = app.add_subcommand(name);
    flags.attach(cmd);
    cmd->callback([&which, name]() { which = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = flags.resolve();
    if (which == "equilibrium") return finish(run_equilibrium_stage(cfg));
    if (which == "verblunsky") return finish(run_verblunsky_stage(cfg));
    if (which == "verify-string") return finish(run_verify_string_stage(cfg));
    if (which == "asymptotics") return finish(run_asymptotics_stage(cfg));
    if (which == "compare") return finish(run_compare_stage(cfg));
    RunReport rep = run(cfg);
    int rc = 0;
    for (const auto& s : rep.stages) rc |= finish(s);
    std::printf("report: %s\n", (std::filesystem::path(cfg.out_dir) / "report.json").c_str());
    return rc;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", error_code_name(e.code), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
