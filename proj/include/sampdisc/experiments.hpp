#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sampdisc/io.hpp"

namespace sampdisc {

inline constexpr const char* kToolkitName = "sampdisc";
const char* toolkit_version();

/// One experiment. Unused fields keep their defaults; see README for which
/// kinds read which fields.
struct ExperimentConfig {
  /// certify | nikolskii | generate | subsample | recover | study-scaling |
  /// study-lacunary | study-tensor
  std::string kind;
  Json space;
  double p = 2.0;
  double q = 2.0;
  double eps = 0.5;
  std::optional<std::uint64_t> seed;

  /// Point generation: iid | equispaced | tensor | leverage.
  std::string mode = "equispaced";
  std::size_t m = 0;
  std::vector<std::size_t> factor_sizes;
  std::string factor_mode = "equispaced";
  /// Explicit points (array of coordinate arrays) replacing generation.
  Json points;
  std::vector<double> weights;

  /// Searches: iid | equispaced.
  std::string generator = "iid";
  int trials = 50;
  double success_threshold = 0.9;
  std::size_t m_max = 0;
  /// Studies: N (scaling, odd) or n (lacunary) values.
  std::vector<int> sizes;
  double ratio = 2.0;

  std::size_t stage1_size = 0;
  std::size_t stage2_size = 0;
  int retries = 0;
  int restarts = 64;
  int max_iterations = 300;

  /// Recovery target: {"terms": [{"k": [..], "c": re | [re, im]}, ...]}.
  Json target;

  std::string out;
  std::map<std::string, double> tolerances;
  unsigned threads = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

Json config_to_json(const ExperimentConfig& config);
/// Throws config-error naming the offending field.
ExperimentConfig config_from_json(const Json& j);
/// Checks cross-field requirements (seed for randomized kinds, ranges, eps).
void validate_config(const ExperimentConfig& config);

/// Tolerance keys accepted by --tolerance and the config's "tolerances".
std::vector<std::string> tolerance_keys();

struct Report {
  Json json;
  std::string series_csv;
  /// Human-readable table for stdout.
  std::string summary;
  /// "ok", "budget-exhausted" or "search-failed".
  std::string status = "ok";
};

/// Runs the experiment. Structured per-trial logs go to `log` when given.
/// Files are written by write_report, not here.
Report run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Writes report.json and series.csv into `dir` (created if missing).
void write_report(const Report& report, const std::string& dir);

struct LogLogFit {
  double exponent = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual in log space.
  double residual = 0.0;
};

/// Least-squares fit of log y = intercept + exponent log x.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace sampdisc
