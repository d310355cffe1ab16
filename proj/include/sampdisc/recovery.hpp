#pragma once

#include <span>
#include <vector>

#include "sampdisc/discretization.hpp"
#include "sampdisc/norms.hpp"

namespace sampdisc {

struct RecoveryResult {
  CoefficientVector coefficients;
  /// ||S(f - u, xi)||_{p,w}.
  double discrete_residual = 0.0;
  double p = 2.0;
  std::vector<double> weights_used{};
  int iterations = 0;
  /// First-order optimality measure at the returned coefficients.
  double gradient_norm = 0.0;
  bool converged = true;
  /// p = 2 only: the sampled system was rank-deficient and the minimum-norm
  /// solution was returned.
  bool degenerate = false;
};

/// argmin over u in X_N of ||S(f - u, xi)||_{p,w}. The sample vector must
/// carry its points. p = inf uses a discrete Chebyshev fit and ignores weights.
RecoveryResult lpw_recover(const SampleVector& samples, const Subspace& space, double p,
                           std::span<const double> weights, const LpSolverOptions& options = {});

/// 2 C1^{-1} C2^{1/p} + 1 with C1 = c1_pow^{1/p} (norm form) and C2 = sum of
/// the weights. An unweighted certificate only applies to weights 1/m.
double recovery_bound(const Certificate& cert, std::span<const double> weights, double p);

struct RecoveryOptions {
  double slack = 1.05;
  CertifyBudget certify_budget;
  NormOptions norm_options;
};

struct RecoveryBoundReport {
  RecoveryResult recovery;
  double p = 2.0;
  Certificate certificate{};
  double c1_norm = 0.0;
  double c2_weights = 0.0;
  double bound_constant = 0.0;
  /// ||f - u||_p and its quadrature error estimate.
  double lhs = 0.0;
  double lhs_tolerance = 0.0;
  /// Grid estimate of d(f, X_N)_inf.
  double d_inf = 0.0;
  double rhs = 0.0;
  double slack = 1.05;
  bool holds = true;
  /// Set when the constants are heuristic (p = inf).
  bool advisory = false;
};

RecoveryBoundReport verify_recovery(const TargetFunction& f, const Subspace& space, const WeightedPointSet& sample,
                                    double p, const RecoveryOptions& options = {});

}  // namespace sampdisc
