#pragma once

#include <Eigen/Dense>

namespace sampdisc {

struct LpSolverOptions {
  /// Stop when ||grad F^{1/p}|| falls below this.
  double optimality_tolerance = 1e-8;
  int max_iterations = 500;
  /// Residual moduli are clipped below at this value when forming weights.
  double residual_floor = 1e-12;
};

struct LpSolution {
  Eigen::VectorXcd y;
  /// F(y) = sum_k w_k |b_k - (A y)_k|^p.
  double objective = 0.0;
  /// ||grad F^{1/p}|| at y.
  double optimality = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set when A (scaled by the weights) has numerical rank below its width;
  /// y is then the minimum-norm solution.
  bool rank_deficient = false;
};

/// F(y) and its real gradient written as a complex vector G, so that the
/// directional derivative along delta is Re(G^* delta).
struct LpObjective {
  double value = 0.0;
  Eigen::VectorXcd gradient;
};

LpObjective weighted_lp_objective(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& w,
                                  double p, const Eigen::VectorXcd& y);

/// Weighted least squares, minimum-norm when rank-deficient.
LpSolution solve_weighted_l2(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& w);

/// Minimizes sum_k w_k |b_k - (A y)_k|^p for 1 <= p < inf. The problem is
/// convex; iterations start from the weighted least-squares solution and use
/// reweighted Newton steps (2x2 weight blocks per residual) with Armijo
/// backtracking, falling back to a gradient step when the Newton direction
/// fails to descend.
LpSolution minimize_weighted_lp(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& w,
                                double p, const LpSolverOptions& options = {});

struct MinimaxSolution {
  Eigen::VectorXcd y;
  /// max_k |b_k - (A y)_k| at y.
  double upper = 0.0;
  /// Lower bound on min_y max_k |b_k - (A y)_k| from the Lawson weights.
  double lower = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Discrete complex Chebyshev fit by Lawson's reweighting, stopped when
/// upper - lower <= relative_tolerance * upper.
MinimaxSolution minimax_fit(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double relative_tolerance = 1e-4,
                            int max_iterations = 50000);

}  // namespace sampdisc
