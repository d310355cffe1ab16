#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sampdisc/function_spaces.hpp"
#include "sampdisc/quadrature.hpp"

namespace sampdisc {

// ------------------------------------------------------------------ point sets

enum class ProvenanceKind { iid, equispaced, tensor, leverage, subsample, given };

std::string to_string(ProvenanceKind kind);

struct PointSet;

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::given;
  /// Stream the points were drawn from (random kinds).
  std::optional<std::uint64_t> seed;
  /// Equispaced: nodes per coordinate. Tensor: factor sizes.
  std::vector<std::size_t> sizes;
  std::vector<std::shared_ptr<const PointSet>> factors;
  std::shared_ptr<const PointSet> parent;
  /// Subsample: indices into the parent.
  std::vector<std::size_t> indices;
  /// Leverage: fraction of accepted proposals in rejection sampling.
  std::optional<double> acceptance_rate;
};

/// Discretization nodes xi = {xi^1, ..., xi^m}.
struct PointSet {
  std::vector<Point> points;
  Provenance provenance;

  std::size_t size() const { return points.size(); }
};

/// Nodes with positive weights w_1..w_m.
struct WeightedPointSet {
  PointSet points;
  std::vector<double> weights;
  double weight_sum = 0.0;

  WeightedPointSet() = default;
  WeightedPointSet(PointSet p, std::vector<double> w);
  /// Weights 1/m.
  static WeightedPointSet uniform(PointSet p);

  std::size_t size() const { return points.size(); }
};

PointSet generate_iid(const Domain& domain, std::size_t m, std::uint64_t seed);
/// Equispaced nodes 2 pi j / m in each coordinate (full grid of m^d points).
PointSet generate_equispaced(const Domain& domain, std::size_t m);
/// Cartesian product, first factor varying slowest.
PointSet generate_tensor(std::vector<PointSet> factors);
/// m draws from the density (sum_i |u_i(x)|^2 / N) dmu by rejection sampling
/// against the envelope N t^2, with weights N / (m sum_i |u_i(xi^j)|^2).
WeightedPointSet generate_leverage(const Subspace& space, std::size_t m, std::uint64_t seed);

enum class GenerationMode { iid, equispaced, tensor, leverage };

std::string to_string(GenerationMode mode);
GenerationMode generation_mode_from_string(const std::string& s);

struct GenerateRequest {
  GenerationMode mode = GenerationMode::iid;
  std::size_t m = 0;
  /// Tensor mode: points per factor, drawn with `factor_mode`.
  std::vector<std::size_t> factor_sizes;
  GenerationMode factor_mode = GenerationMode::equispaced;
  std::optional<std::uint64_t> seed;
};

std::variant<PointSet, WeightedPointSet> generate_points(const Subspace& space, const GenerateRequest& request);

Subspace restrict_space(const Subspace& space, const PointSet& sample);

// ---------------------------------------------------------------- certificates

enum class CertificateMethod { exact_eigen, exact_quadrature, optimization_bound, brute_force };
enum class CertificateStatus { certified, heuristic_upper_c1, heuristic };

std::string to_string(CertificateMethod method);
std::string to_string(CertificateStatus status);

/// Constants of C1 ||f||_p^p <= sum_j w_j |f(xi^j)|^p <= C2 ||f||_p^p (w_j = 1/m
/// unless `weighted`). For p = inf, c1_pow is the norm-form C1 of
/// C1 ||f||_inf <= max_j |f(xi^j)| and c2_pow = 1.
struct Certificate {
  double p = 2.0;
  double c1_pow = 0.0;
  double c2_pow = 0.0;
  CertificateMethod method = CertificateMethod::exact_eigen;
  CertificateStatus status = CertificateStatus::certified;
  double tolerance = 0.0;
  bool weighted = false;
  double weight_sum = 1.0;
  std::size_t m = 0;
};

struct CertifyBudget {
  /// Restarts of the sphere optimizer for general p.
  int restarts = 64;
  int max_iterations = 300;
  std::uint64_t seed = 0x5eedULL;
  QuadratureOptions quadrature;
};

/// Certified (p = 2, exact-quadrature even p) or heuristic constants for the
/// sample on the subspace. General-p results are one-sided: the minimum found
/// is an upper bound on the best C1 and the maximum found a lower bound on the
/// best C2.
Certificate certify(const Subspace& space, const PointSet& sample, double p, const CertifyBudget& budget = {});
Certificate certify(const Subspace& space, const WeightedPointSet& sample, double p,
                    const CertifyBudget& budget = {});

/// Independent grid-sweep oracle for N <= 3: parametrizes unit coefficient
/// vectors modulo phase by 2N-2 angles, sweeps a grid of spacing pi/(2
/// resolution) (a coarse full sweep followed by local grid zooms when the full
/// grid is too large), and reports the observed variation within one grid
/// step as the tolerance.
Certificate brute_force_certificate(const Subspace& space, const PointSet& sample, double p, int resolution);

// ------------------------------------------------------------ two-stage search

struct TwoStageBudget {
  std::size_t stage1_size = 0;
  std::size_t stage2_size = 0;
  /// Stage 2 draws at most retries + 1 subsets.
  int retries = 0;
};

struct TwoStageResult {
  PointSet stage1;
  Certificate stage1_certificate;
  PointSet points;
  /// Subset against the continuous L_q norm.
  Certificate certificate;
  /// Subset against the uniform measure on the stage-1 points.
  Certificate restricted_certificate;
  int attempts = 0;
};

class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, TwoStageResult best)
      : Error(ErrorCode::budget_exhausted, what), best_(std::move(best)) {}
  const TwoStageResult& best() const { return best_; }

 private:
  TwoStageResult best_;
};

TwoStageResult two_stage_subsample(const Subspace& space, double q, double eps, const TwoStageBudget& budgets,
                                   std::uint64_t seed, const CertifyBudget& certify_budget = {});

// ------------------------------------------------------------ minimal m search

enum class SearchGenerator { iid, equispaced };

struct SearchOptions {
  double p = 2.0;
  double eps = 0.5;
  int trials = 50;
  double success_threshold = 0.9;
  std::uint64_t seed = 0;
  /// 0 selects ceil(20 N log2(2N)).
  std::size_t m_max = 0;
  SearchGenerator generator = SearchGenerator::iid;
  CertifyBudget budget;
  /// Called once per trial, in trial order, after each size is evaluated.
  std::function<void(std::size_t m, int trial, std::uint64_t stream, const Certificate&)> on_trial;
};

struct CurvePoint {
  std::size_t m = 0;
  int trials = 0;
  int successes = 0;
  double c1_min = 0.0;
  double c2_max = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct SearchResult {
  std::size_t m_star = 0;
  /// Every evaluated m, ascending.
  std::vector<CurvePoint> curve;
};

class SearchFailed : public Error {
 public:
  SearchFailed(const std::string& what, std::vector<CurvePoint> curve)
      : Error(ErrorCode::search_failed, what), curve_(std::move(curve)) {}
  const std::vector<CurvePoint>& curve() const { return curve_; }

 private:
  std::vector<CurvePoint> curve_;
};

/// Smallest m in [N, m_max] whose success rate reaches the threshold, found by
/// doubling from N followed by bisection. Trial t at size m draws from stream
/// derive_stream(seed, m, t).
SearchResult minimal_m_search(const Subspace& space, const SearchOptions& options);

/// Certificate of one trial as used by minimal_m_search.
Certificate search_trial(const Subspace& space, const SearchOptions& options, std::size_t m, int trial);

// ----------------------------------------------------------- factor extraction

struct ExtractedFactor {
  PointSet points;
  Certificate certificate;
};

/// Transfers a certificate of a tensor sample on the tensor space to one
/// factor: F(x) = f(x^i) lies in the tensor space when every factor contains
/// the constants, and its discrete and continuous p-norms reduce to those of f
/// on the i-th factor sample.
ExtractedFactor extract_factor(const Subspace& tensor_space, const PointSet& tensor_sample, std::size_t index,
                               const Certificate& tensor_certificate);

// ------------------------------------------------------------------- budgets

/// Sample-size formulas with a configurable leading constant.
namespace budgets {
/// C K^beta eps^-2 log(2/eps) N^{beta+1} log N.
double random_points(double K, double beta, double eps, double N, double C = 1.0);
/// C B^q eps^-2 log(2/eps) N^2 log N.
double stage1(double B, double q, double eps, double N, double C = 1.0);
/// C B^q N (log2(2BN))^2.
double entropy_bound(double B, double q, double N, double C = 1.0);
/// C B^q N (log2(2BN))^3.
double nikolskii_bound(double B, double q, double N, double C = 1.0);
/// C B^p N^{p/q} (log2(2BN))^3.
double nikolskii_bound_p(double B, double p, double q, double N, double C = 1.0);
}  // namespace budgets

}  // namespace sampdisc
