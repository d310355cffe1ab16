#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sampdisc/function_spaces.hpp"
#include "sampdisc/lp_solver.hpp"
#include "sampdisc/quadrature.hpp"

namespace sampdisc {

/// Tolerances of the norm computations. Defaults are the documented contract.
struct NormOptions {
  /// Successive dyadic refinements of a non-even-p quadrature must agree to
  /// this relative tolerance.
  double refine_tolerance = 1e-9;
  int initial_grid = 256;
  std::size_t max_grid_nodes = std::size_t{1} << 22;
  /// Sup-norm grid: at least this many nodes per unit of degree (and in total)
  /// per coordinate.
  int sup_grid_factor = 64;
  /// Grid used by best_approx for function targets on the 1-torus.
  int best_approx_grid = 1024;
  double minimax_tolerance = 1e-4;
  LpSolverOptions solver;
  QuadratureOptions quadrature;
};

/// A scalar obtained by quadrature together with its absolute error estimate.
struct NormValue {
  double value = 0.0;
  double tolerance = 0.0;
  std::size_t nodes = 0;
};

using TargetFunction = std::function<Complex(const Point&)>;

/// S(f, xi): values of f at the points of a sample.
struct SampleVector {
  std::vector<Complex> values;
  std::shared_ptr<const std::vector<Point>> source;

  std::size_t size() const { return values.size(); }
};

SampleVector sample(const TargetFunction& f, std::shared_ptr<const std::vector<Point>> points);
SampleVector sample(const CoefficientVector& f, std::shared_ptr<const std::vector<Point>> points);

/// ||f||_p on the subspace's domain. Exact for even p on the torus and for
/// finite sets; dyadically refined Riemann sums otherwise.
double norm_p(const CoefficientVector& f, double p, const NormOptions& options = {});
NormValue norm_p_value(const CoefficientVector& f, double p, const NormOptions& options = {});
/// ||g||_p for an arbitrary continuous function on the domain.
NormValue norm_p_value(const TargetFunction& g, const Domain& domain, double p, const NormOptions& options = {});

/// ||f||_inf. On the torus a lower estimate from a grid of at least
/// 64 x degree nodes per coordinate followed by bracketed 1-d maximization
/// along each coordinate; exact on finite sets.
double norm_sup(const CoefficientVector& f, const NormOptions& options = {});

/// ||S(f, xi)||_{p,w}. Without weights the weights are 1/m; p = inf is the
/// plain maximum and does not accept weights.
double discrete_norm(std::span<const Complex> values, double p,
                     std::optional<std::span<const double>> weights = std::nullopt);

struct BestApproximation {
  CoefficientVector projection;
  /// Estimate of d(f, X_N)_p. On the torus it is computed on a grid and is a
  /// lower estimate of the continuous quantity (for p = inf, a certified lower
  /// bound of the grid minimax value).
  double distance = 0.0;
  /// Norm of f - projection on the grid (>= distance).
  double upper = 0.0;
  bool lower_estimate = true;
  std::size_t grid_nodes = 0;
  int iterations = 0;
  bool converged = true;
};

/// Chebyshev projection onto X_N and the distance d(f, X_N)_p.
BestApproximation best_approx(const TargetFunction& target, const Subspace& space, double p,
                              const NormOptions& options = {});
/// Same on a caller-supplied grid with target values already sampled there.
BestApproximation best_approx(const Quadrature& grid, std::span<const Complex> target_values, const Subspace& space,
                              double p, const NormOptions& options = {});
/// The grid best_approx uses for function targets.
Quadrature best_approx_grid(const Subspace& space, const NormOptions& options = {});

/// t with sup_x sum_i |u_i(x)|^2 = N t^2 for the L2-orthonormalized basis.
double christoffel_sup(const Subspace& space);

enum class NikolskiiMethod { analytic, convex };

std::string to_string(NikolskiiMethod method);

struct NikolskiiEstimate {
  double q = 2.0;
  /// Lower estimate of the best M in ||f||_inf <= M ||f||_q (exact for q = 2).
  double M = 1.0;
  /// M / N^{1/q}.
  double B = 1.0;
  NikolskiiMethod method = NikolskiiMethod::analytic;
  std::size_t grid_size = 0;
  /// Coefficients of the extremal function found (not set for q = 2).
  std::optional<Eigen::VectorXcd> extremal;
};

/// Nikol'skii constant. For q = 2 the exact value sqrt(sup Christoffel sum).
/// For other q, M = max_x 1 / min{||f||_q : f(x) = 1}: each inner problem is
/// convex and solved to first-order tolerance. Torus exponential spaces are
/// translation invariant, so x = 0 suffices; finite sets scan every point, or
/// the 64 with the largest Christoffel values when there are more than 256.
/// The reported M is ||f||_inf / ||f||_q of the extremal f found, hence a
/// certified lower bound.
NikolskiiEstimate nikolskii_constant(const Subspace& space, double q, const NormOptions& options = {});

}  // namespace sampdisc
