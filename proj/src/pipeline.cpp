#include "opuclab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

namespace opuclab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

namespace {

struct Csv {
  std::ofstream f;
  explicit Csv(const fs::path& path) : f(path, std::ios::binary) {}
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) f << ',';
      f << csv_escape(fields[i]);
    }
    f << '\n';
  }
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int auto_kmax(const ExperimentConfig& cfg, int n) {
  return cfg.kmax > 0 ? cfg.kmax : n + cfg.window + 8;
}

// One precision for the whole ladder: the backend's default precision is a
// process-wide setting, so mixed-precision workers would interfere.
unsigned ladder_precision(const ExperimentConfig& cfg) {
  if (cfg.precision_bits) return cfg.precision_bits;
  unsigned bits = 0;
  for (int n : cfg.n_ladder) bits = std::max(bits, default_precision_bits(n));
  return bits;
}

template <class Fn>
StageResult guarded_stage(const std::string& name, Fn&& body) {
  StageResult res;
  res.name = name;
  res.ran = true;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(res);
    res.ok = res.message.empty();
    if (res.ok) res.message = "ok";
  } catch (const Error& e) {
    res.ok = false;
    res.message = std::string(error_code_name(e.code)) + ": " + e.what();
  } catch (const std::exception& e) {
    res.ok = false;
    res.message = e.what();
  }
  res.seconds = elapsed_since(t0);
  return res;
}

}  // namespace

double ExperimentConfig::tol(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

void ExperimentConfig::validate() const {
  if (potential_coeffs.empty())
    throw Error(ErrorCode::CONFIG_INVALID, "potential.coeffs must be non-empty");
  if (n_ladder.empty()) throw Error(ErrorCode::CONFIG_INVALID, "n ladder must be non-empty");
  int prev = 0;
  for (int n : n_ladder) {
    if (n < 4) throw Error(ErrorCode::CONFIG_INVALID, "every n must be >= 4");
    if (n <= prev) throw Error(ErrorCode::CONFIG_INVALID, "n ladder must be strictly increasing");
    prev = n;
  }
  if (window < 0) throw Error(ErrorCode::CONFIG_INVALID, "window must be >= 0");
  if (window > epsilon1 * n_ladder.front())
    throw Error(ErrorCode::CONFIG_INVALID, "window exceeds epsilon1 * min(n)");
  if (jobs < 1) throw Error(ErrorCode::CONFIG_INVALID, "jobs must be >= 1");
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::CONFIG_INVALID, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const json& pot = j.at("potential");
    cfg.potential_coeffs = pot.at("coeffs").get<std::vector<double>>();
    cfg.potential_name = pot.value("name", "");
    cfg.n_ladder = j.at("n").get<std::vector<int>>();
    cfg.window = j.value("window", 5);
    cfg.precision_bits = j.value("precision", 0u);
    cfg.kmax = j.value("kmax", 0);
    cfg.epsilon1 = j.value("epsilon1", 0.3);
    cfg.jobs = j.value("jobs", 1);
    cfg.out_dir = j.value("out", "out");
    if (j.contains("tolerances"))
      cfg.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::CONFIG_INVALID, std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["potential"] = {{"coeffs", cfg.potential_coeffs}, {"name", cfg.potential_name}};
  j["n"] = cfg.n_ladder;
  j["window"] = cfg.window;
  j["precision"] = cfg.precision_bits;
  j["kmax"] = cfg.kmax;
  j["epsilon1"] = cfg.epsilon1;
  j["jobs"] = cfg.jobs;
  j["out"] = cfg.out_dir;
  j["tolerances"] = cfg.tolerances;
  return j.dump(2);
}

StageResult run_equilibrium_stage(const ExperimentConfig& cfg) {
  return guarded_stage("equilibrium", [&](StageResult& res) {
    fs::create_directories(cfg.out_dir);
    Potential p = cfg.potential();
    EquilibriumMeasure m = solve_support(p);
    ConditionReport cr = check_conditions(p, m);

    json j;
    j["theta"] = m.theta();
    j["whole_circle"] = m.whole_circle();
    j["P_theta"] = m.P_theta();
    j["a"] = m.a();
    j["b"] = m.b();
    j["c"] = m.c();
    j["mass"] = m.mass();
    j["conditions"] = {{"rho_min", cr.rho_min},
                       {"rho_positive", cr.rho_positive},
                       {"edge_exponent_left", cr.edge_exponent_left},
                       {"edge_exponent_right", cr.edge_exponent_right},
                       {"edge_exponent_ok", cr.edge_exponent_ok},
                       {"u_interior_spread", cr.u_interior_spread},
                       {"u_exterior_margin", cr.u_exterior_margin},
                       {"u_minimality_ok", cr.u_minimality_ok},
                       {"arc_checks_skipped", cr.arc_checks_skipped},
                       {"all_ok", cr.all_ok()}};

    fs::path jp = fs::path(cfg.out_dir) / "equilibrium.json";
    std::ofstream(jp, std::ios::binary) << j.dump(2) << '\n';
    res.files.push_back(jp.string());

    fs::path cp = fs::path(cfg.out_dir) / "equilibrium.csv";
    Csv csv(cp);
    csv.row({"lambda", "rho", "P", "u"});
    double span = m.whole_circle() ? M_PI : m.theta();
    EffectivePotential ep = effective_potential(m);
    for (int i = 0; i <= 64; ++i) {
      double lam = -span + 2.0 * span * i / 64.0;
      double P = m.whole_circle() ? 0.0 : m.P_at(lam);
      csv.row({format_double(lam), format_double(m.rho_at(lam)), format_double(P),
               format_double(m.u_at(lam) - ep.u_min)});
    }
    res.files.push_back(cp.string());
    if (!cr.all_ok()) res.message = "condition checks failed";
  });
}

namespace {

void write_sequence_files(const ExperimentConfig& cfg, const VerblunskySequence& vs,
                          StageResult& res, std::mutex& mu) {
  fs::path cp = fs::path(cfg.out_dir) / ("verblunsky_n" + std::to_string(vs.n) + ".csv");
  Csv csv(cp);
  csv.row({"k", "alpha", "rho"});
  for (int k = 1; k <= vs.kmax; ++k)
    csv.row({std::to_string(k), format_double(vs.alpha(k)), format_double(vs.rho(k))});

  json j;
  j["n"] = vs.n;
  j["kmax"] = vs.kmax;
  j["precision_used"] = vs.precision_used;
  j["alpha_rho_residual"] = to_decimal_string(vs.alpha_rho_residual);
  fs::path jp = fs::path(cfg.out_dir) / ("verblunsky_n" + std::to_string(vs.n) + ".json");
  std::ofstream(jp, std::ios::binary) << j.dump(2) << '\n';

  std::lock_guard<std::mutex> lock(mu);
  res.files.push_back(cp.string());
  res.files.push_back(jp.string());
}

// Fans the per-n computations out to `jobs` workers; per-n output files are
// written independently, so worker count never changes file contents.
std::vector<VerblunskySequence> ladder_sequences(const ExperimentConfig& cfg) {
  std::vector<VerblunskySequence> out(cfg.n_ladder.size());
  std::atomic<std::size_t> next{0};
  int workers = std::min<int>(cfg.jobs, static_cast<int>(cfg.n_ladder.size()));
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cfg.n_ladder.size()) return;
        try {
          out[i] = sequence_for(cfg, cfg.n_ladder[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace

StageResult run_verblunsky_stage(const ExperimentConfig& cfg) {
  return guarded_stage("verblunsky", [&](StageResult& res) {
    fs::create_directories(cfg.out_dir);
    auto seqs = ladder_sequences(cfg);
    std::mutex mu;
    for (const auto& vs : seqs) write_sequence_files(cfg, vs, res, mu);
  });
}

StageResult run_verify_string_stage(const ExperimentConfig& cfg) {
  return guarded_stage("verify-string", [&](StageResult& res) {
    fs::create_directories(cfg.out_dir);
    int n = cfg.n_ladder.front();
    int kmax = std::min(auto_kmax(cfg, n), n + cfg.window + 4);
    OrthonormalBasis basis = make_basis(cfg.potential(), n, kmax, cfg.precision_bits);
    const VerblunskySequence& vs = basis.sequence();

    fs::path cp = fs::path(cfg.out_dir) / ("verify_string_n" + std::to_string(n) + ".csv");
    Csv csv(cp);
    csv.row({"k", "residual_integral", "residual_matrix"});
    double worst = 0.0;
    int window = std::max(8, std::min(n, 40));
    for (int k = 2; k <= std::min(kmax - 2, 12); ++k) {
      double ri = static_cast<double>(string_residual_integral(basis, k).abs());
      double rm = std::numeric_limits<double>::quiet_NaN();
      if (k + window <= vs.kmax - 1) {
        try {
          rm = string_residual_matrix(vs, cfg.potential(), k - n, window).residual;
        } catch (const Error&) {
          // matrix route can be window-limited at tiny sizes; integral is the oracle
        }
      }
      worst = std::max(worst, ri);
      csv.row({std::to_string(k), format_double(ri),
               std::isnan(rm) ? std::string("") : format_double(rm)});
    }
    res.files.push_back(cp.string());
    if (worst > cfg.tol("string_residual", 1e-8)) res.message = "string residual above tolerance";
  });
}

StageResult run_asymptotics_stage(const ExperimentConfig& cfg) {
  return guarded_stage("asymptotics", [&](StageResult& res) {
    fs::create_directories(cfg.out_dir);
    Potential p = cfg.potential();
    EquilibriumMeasure m = solve_support(p);

    json j;
    j["theta"] = m.theta();
    j["whole_circle"] = m.whole_circle();
    if (!m.whole_circle()) {
      FourierCoeffs fc = fourier_v(p, m.theta(), 64);
      BTable bt = b_coeffs(fc, 16);
      ToeplitzSymbol sym = make_toeplitz_symbol(fc, 64);
      AsymptoticModel am = make_model(m, 1);
      j["P_theta"] = m.P_theta();
      j["slope_displayed"] = am.slope;
      j["slope_symbol_route"] = slope_from_symbol(m, sym);
      j["v"] = fc.v;
      j["B"] = bt.values;
      j["v_identity_residual"] = std::abs(fc.v[2] - 2.0 * fc.v[0] - 2.0 / fc.c);

      fs::path sp = fs::path(cfg.out_dir) / "symbol.csv";
      Csv scsv(sp);
      scsv.row({"phi", "delta_closed", "delta_fourier"});
      for (int i = 0; i <= 64; ++i) {
        double phi = -M_PI + 2.0 * M_PI * i / 64.0;
        scsv.row({format_double(phi), format_double(symbol_delta(m, phi)),
                  format_double(symbol_delta_fourier(fc, phi))});
      }
      res.files.push_back(sp.string());
    }
    fs::path jp = fs::path(cfg.out_dir) / "asymptotics.json";
    std::ofstream(jp, std::ios::binary) << j.dump(2) << '\n';
    res.files.push_back(jp.string());
  });
}

StageResult run_compare_stage(const ExperimentConfig& cfg) {
  return guarded_stage("compare", [&](StageResult& res) {
    fs::create_directories(cfg.out_dir);
    Potential p = cfg.potential();
    EquilibriumMeasure m = solve_support(p);
    auto seqs = ladder_sequences(cfg);

    json summary;
    summary["whole_circle"] = m.whole_circle();
    if (m.whole_circle()) {
      json trend = json::array();
      double prev = std::numeric_limits<double>::infinity();
      bool decreasing = true;
      for (const auto& vs : seqs) {
        WholeCircleReport rep = whole_circle_check(vs, std::min(cfg.window, 3));
        trend.push_back({{"n", rep.n}, {"max_abs_alpha", rep.max_abs_alpha}});
        decreasing = decreasing && (rep.max_abs_alpha < prev || rep.max_abs_alpha < 1e-14);
        prev = rep.max_abs_alpha;
      }
      summary["decay"] = trend;
      summary["decreasing"] = decreasing;
      if (!decreasing) res.message = "whole-circle decay not monotone";
    } else {
      // s estimated from the largest n, then shared
      AsymptoticModel am = make_model(m, 1);
      am.epsilon1 = cfg.epsilon1;
      FitReport probe = fit_prediction(seqs.back(), am, cfg.window);
      am.s = probe.s;
      FourierCoeffs fc = fourier_v(p, m.theta(), 64);
      ToeplitzSymbol sym = make_toeplitz_symbol(fc, 64);
      double slope_sym = slope_from_symbol(m, sym);

      json fits = json::array();
      for (const auto& vs : seqs) {
        FitReport rep = fit_prediction(vs, am, cfg.window);
        fs::path cp = fs::path(cfg.out_dir) / ("compare_n" + std::to_string(vs.n) + ".csv");
        Csv csv(cp);
        csv.row({"n", "m", "alpha_computed", "alpha_predicted", "x_extracted", "x_predicted"});
        for (const auto& pt : rep.points)
          csv.row({std::to_string(vs.n), std::to_string(pt.m), format_double(pt.alpha_computed),
                   format_double(pt.alpha_predicted), format_double(pt.x_extracted),
                   format_double(pt.x_predicted)});
        res.files.push_back(cp.string());
        fits.push_back({{"n", vs.n},
                        {"s", rep.s},
                        {"slope_fit", rep.slope_fit},
                        {"intercept", rep.intercept},
                        {"slope_displayed", rep.slope_model},
                        {"slope_symbol_route", slope_sym},
                        {"max_fit_residual", rep.max_fit_residual}});
      }
      summary["fits"] = fits;
    }
    fs::path jp = fs::path(cfg.out_dir) / "compare.json";
    std::ofstream(jp, std::ios::binary) << summary.dump(2) << '\n';
    res.files.push_back(jp.string());
  });
}

RunReport run(const ExperimentConfig& cfg) {
  RunReport rep;
  rep.config = cfg;
  rep.stages.push_back(run_equilibrium_stage(cfg));
  rep.stages.push_back(run_verblunsky_stage(cfg));
  rep.stages.push_back(run_verify_string_stage(cfg));
  rep.stages.push_back(run_asymptotics_stage(cfg));
  rep.stages.push_back(run_compare_stage(cfg));
  rep.all_ok = true;
  for (const auto& s : rep.stages) rep.all_ok = rep.all_ok && s.ok;

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream(fs::path(cfg.out_dir) / "report.json", std::ios::binary)
      << report_to_json(rep, false) << '\n';
  return rep;
}

std::string report_to_json(const RunReport& rep, bool include_timings) {
  json j;
  j["config"] = json::parse(config_to_json(rep.config));
  json stages = json::array();
  for (const auto& s : rep.stages) {
    json sj{{"name", s.name}, {"ok", s.ok}, {"message", s.message}, {"files", s.files}};
    if (include_timings) sj["seconds"] = s.seconds;
    stages.push_back(sj);
  }
  j["stages"] = stages;
  j["all_ok"] = rep.all_ok;
  return j.dump(2);
}

}  // namespace opuclab
