#include "sampdisc/recovery.hpp"

#include <algorithm>
#include <cmath>

namespace sampdisc {

namespace {

double bound_constant(double c1_norm, double c2, double p) {
  const double c2_root = is_infinite_exponent(p) ? 1.0 : std::pow(c2, 1.0 / p);
  return 2.0 * c2_root / c1_norm + 1.0;
}

double norm_form(double c1_pow, double p) { return is_infinite_exponent(p) ? c1_pow : std::pow(c1_pow, 1.0 / p); }

}  // namespace

RecoveryResult lpw_recover(const SampleVector& samples, const Subspace& space, double p,
                           std::span<const double> weights, const LpSolverOptions& options) {
  check_exponent(p);
  check(samples.source != nullptr, ErrorCode::invalid_sample, "sample vector does not carry its points");
  const std::size_t m = samples.size();
  check(m >= 1 && samples.source->size() == m, ErrorCode::invalid_sample, "sample values and points differ");
  check(weights.size() == m, ErrorCode::invalid_size, "one weight per sample required");
  for (double w : weights) check(w > 0 && std::isfinite(w), ErrorCode::invalid_weight, "weights must be positive");

  const Eigen::MatrixXcd A = space.basis_matrix(*samples.source);
  const Eigen::Map<const Eigen::VectorXcd> b(samples.values.data(), static_cast<Eigen::Index>(m));
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), static_cast<Eigen::Index>(m));

  RecoveryResult out{.coefficients = CoefficientVector(space, Eigen::VectorXcd::Zero(space.size()))};
  out.p = p;
  out.weights_used.assign(weights.begin(), weights.end());
  Eigen::VectorXcd y;
  if (is_infinite_exponent(p)) {
    const MinimaxSolution fit = minimax_fit(A, b);
    y = fit.y;
    out.iterations = fit.iterations;
    out.converged = fit.converged;
    out.gradient_norm = fit.upper - fit.lower;
  } else if (p == 2.0) {
    const LpSolution sol = solve_weighted_l2(A, b, w);
    y = sol.y;
    out.degenerate = sol.rank_deficient;
    out.gradient_norm = weighted_lp_objective(A, b, w, 2.0, y).gradient.norm();
  } else {
    const LpSolution sol = minimize_weighted_lp(A, b, w, p, options);
    y = sol.y;
    out.iterations = sol.iterations;
    out.converged = sol.converged;
    out.gradient_norm = sol.optimality;
    out.degenerate = sol.rank_deficient;
  }
  out.coefficients = CoefficientVector(space, y);
  const Eigen::VectorXcd r = b - A * y;
  const std::span<const Complex> rs(r.data(), m);
  out.discrete_residual = is_infinite_exponent(p) ? discrete_norm(rs, p) : discrete_norm(rs, p, weights);
  return out;
}

double recovery_bound(const Certificate& cert, std::span<const double> weights, double p) {
  check(cert.p == p, ErrorCode::invalid_exponent, "certificate exponent does not match");
  check(cert.status == CertificateStatus::certified, ErrorCode::refused_heuristic,
        "the error bound needs a certified lower constant, got status " + to_string(cert.status));
  check(cert.c1_pow > 0.0, ErrorCode::unbounded, "lower discretization constant is zero");
  check(!weights.empty(), ErrorCode::invalid_size, "no weights");
  double sum = 0.0;
  for (double w : weights) {
    check(w > 0 && std::isfinite(w), ErrorCode::invalid_weight, "weights must be positive");
    sum += w;
  }
  if (!cert.weighted && !is_infinite_exponent(p)) {
    const double u = 1.0 / static_cast<double>(weights.size());
    const bool uniform = std::all_of(weights.begin(), weights.end(), [&](double w) { return std::abs(w - u) <= 1e-12 * u; });
    check(uniform && (cert.m == 0 || cert.m == weights.size()), ErrorCode::invalid_weight,
          "an unweighted certificate applies to weights 1/m only");
  }
  return bound_constant(norm_form(cert.c1_pow, p), sum, p);
}

RecoveryBoundReport verify_recovery(const TargetFunction& f, const Subspace& space, const WeightedPointSet& sample,
                                    double p, const RecoveryOptions& options) {
  check(static_cast<bool>(f), ErrorCode::invalid_target, "target function is empty");
  const auto points = std::make_shared<const std::vector<Point>>(sample.points.points);
  RecoveryBoundReport report{
      .recovery = lpw_recover(sampdisc::sample(f, points), space, p, sample.weights, options.norm_options.solver)};
  report.p = p;
  report.slack = options.slack;
  report.certificate = certify(space, sample, p, options.certify_budget);
  report.c2_weights = sample.weight_sum;
  if (is_infinite_exponent(p)) {
    // The sup-norm constant is only heuristic; the report is advisory.
    check(report.certificate.c1_pow > 0.0, ErrorCode::unbounded, "lower discretization constant is zero");
    report.advisory = true;
    report.c1_norm = report.certificate.c1_pow;
    report.bound_constant = bound_constant(report.c1_norm, report.c2_weights, p);
  } else {
    report.bound_constant = recovery_bound(report.certificate, sample.weights, p);
    report.c1_norm = norm_form(report.certificate.c1_pow, p);
  }

  const CoefficientVector u = report.recovery.coefficients;
  const TargetFunction error = [&f, &u](const Point& x) { return f(x) - u(x); };
  if (is_infinite_exponent(p)) {
    const Quadrature grid = best_approx_grid(space, options.norm_options);
    double m = 0.0;
    for (const auto& x : grid.nodes) m = std::max(m, std::abs(error(x)));
    report.lhs = m;
  } else {
    const NormValue v = norm_p_value(error, space.domain(), p, options.norm_options);
    report.lhs = v.value;
    report.lhs_tolerance = v.tolerance;
  }
  report.d_inf = best_approx(f, space, kInfinity, options.norm_options).distance;
  report.rhs = report.bound_constant * report.d_inf;
  report.holds = report.lhs <= report.rhs * report.slack;
  return report;
}

}  // namespace sampdisc
