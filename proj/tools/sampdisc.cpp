#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sampdisc/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

double parse_exponent(const std::string& s, const char* flag) {
  if (s == "inf") return sampdisc::kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw sampdisc::Error(sampdisc::ErrorCode::config_error, std::string(flag) + ": not a number: " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling discretization experiments"};
  std::string config_path, out_dir, p, q;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps, threshold;
  std::optional<int> trials;
  std::optional<unsigned> threads;
  std::vector<std::string> tolerances;
  bool quiet = false;

  app.add_option("--config", config_path, "Experiment config (JSON)")->required();
  app.add_option("--seed", seed, "Seed, overrides the config");
  app.add_option("--out", out_dir, "Output directory for report.json and series.csv");
  app.add_option("--p", p, "Exponent p (number or inf)");
  app.add_option("--q", q, "Exponent q");
  app.add_option("--eps", eps, "Target epsilon in (0, 1)");
  app.add_option("--trials", trials, "Trials per sample size");
  app.add_option("--threshold", threshold, "Success-rate threshold");
  app.add_option("--tolerance", tolerances, "Tolerance override KEY=VAL (repeatable)");
  app.add_option("--threads", threads, "Worker threads (0 = hardware)");
  app.add_flag("--quiet", quiet, "Suppress structured logs on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  sampdisc::ExperimentConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw sampdisc::Error(sampdisc::ErrorCode::config_error, "config: cannot open '" + config_path + "'");
    sampdisc::Json j;
    try {
      j = sampdisc::Json::parse(in);
    } catch (const sampdisc::Json::parse_error& e) {
      throw sampdisc::Error(sampdisc::ErrorCode::config_error, std::string("config: ") + e.what());
    }
    config = sampdisc::config_from_json(j);
    if (seed) config.seed = *seed;
    if (!p.empty()) config.p = parse_exponent(p, "--p");
    if (!q.empty()) config.q = parse_exponent(q, "--q");
    if (eps) config.eps = *eps;
    if (trials) config.trials = *trials;
    if (threshold) config.success_threshold = *threshold;
    if (threads) config.threads = *threads;
    if (!out_dir.empty()) config.out = out_dir;
    for (const auto& t : tolerances) {
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw sampdisc::Error(sampdisc::ErrorCode::config_error, "--tolerance: expected KEY=VAL, got " + t);
      config.tolerances[t.substr(0, eq)] = parse_exponent(t.substr(eq + 1), "--tolerance");
    }
    sampdisc::validate_config(config);
  } catch (const sampdisc::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const sampdisc::Report report = sampdisc::run_experiment(config, quiet ? nullptr : &std::cerr);
    sampdisc::write_report(report, config.out.empty() ? "." : config.out);
    std::cout << config.kind << " (" << report.status << ")\n" << report.summary;
    if (report.status == "budget-exhausted" || report.status == "search-failed") return kExitBudget;
    return kExitOk;
  } catch (const sampdisc::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case sampdisc::ErrorCode::config_error: return kExitConfig;
      case sampdisc::ErrorCode::budget_exhausted:
      case sampdisc::ErrorCode::search_failed: return kExitBudget;
      default: return kExitFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
