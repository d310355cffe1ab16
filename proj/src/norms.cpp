#include "sampdisc/norms.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numeric>

namespace sampdisc {

namespace {

double total_nodes(const std::vector<int>& per_dim) {
  double t = 1;
  for (int m : per_dim) t *= m;
  return t;
}

void fit_budget(std::vector<int>& per_dim, std::size_t budget) {
  while (total_nodes(per_dim) > static_cast<double>(budget)) {
    for (auto& m : per_dim) m = std::max(m * 3 / 4, 2);
  }
}

std::vector<Complex> values_at(const TargetFunction& g, std::span<const Point> nodes) {
  std::vector<Complex> out;
  out.reserve(nodes.size());
  for (const auto& x : nodes) out.push_back(g(x));
  return out;
}

double power_mean(std::span<const Complex> values, std::span<const double> weights, double p) {
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) s += weights[k] * std::pow(std::abs(values[k]), p);
  return s;
}

// Dyadic refinement of equispaced Riemann sums for integral |g|^p.
NormValue refined_torus_norm(const TargetFunction& g, int dimension, std::vector<int> per_dim, double p,
                             const NormOptions& options) {
  fit_budget(per_dim, options.max_grid_nodes);
  auto integral = [&](const std::vector<int>& m) {
    const Quadrature rule = equispaced_grid(m);
    const auto vals = values_at(g, rule.nodes);
    return std::make_pair(power_mean(vals, rule.weights, p), rule.size());
  };
  auto [current, nodes] = integral(per_dim);
  double change = kInfinity;
  while (true) {
    std::vector<int> finer = per_dim;
    for (auto& m : finer) m *= 2;
    if (total_nodes(finer) > static_cast<double>(options.max_grid_nodes)) break;
    auto [next, next_nodes] = integral(finer);
    change = std::abs(next - current);
    current = next;
    nodes = next_nodes;
    per_dim = std::move(finer);
    if (change <= options.refine_tolerance * std::max(current, 1e-300)) break;
  }
  (void)dimension;
  NormValue out;
  out.value = std::pow(current, 1.0 / p);
  const double lo = std::pow(std::max(current - change, 0.0), 1.0 / p);
  out.tolerance = std::isfinite(change) ? std::abs(out.value - lo) : kInfinity;
  out.nodes = nodes;
  return out;
}

std::vector<int> starting_grid(const std::vector<int>& degrees, double p, const NormOptions& options) {
  std::vector<int> per_dim;
  const int scale = 4 * (static_cast<int>(std::ceil(p)) + 1);
  for (int deg : degrees) {
    const int base = degrees.size() == 1 ? options.initial_grid : 32;
    per_dim.push_back(std::max(base, scale * deg + 1));
  }
  return per_dim;
}

}  // namespace

SampleVector sample(const TargetFunction& f, std::shared_ptr<const std::vector<Point>> points) {
  SampleVector s;
  s.values = values_at(f, *points);
  s.source = std::move(points);
  return s;
}

SampleVector sample(const CoefficientVector& f, std::shared_ptr<const std::vector<Point>> points) {
  SampleVector s;
  s.values = evaluate(f, *points);
  s.source = std::move(points);
  return s;
}

NormValue norm_p_value(const CoefficientVector& f, double p, const NormOptions& options) {
  check_exponent(p);
  if (is_infinite_exponent(p)) return {norm_sup(f, options), 0.0, 0};
  const Subspace& space = f.space;
  if (!space.is_torus() || is_even_integer(p)) {
    const Quadrature rule = lp_rule(space, p, options.quadrature);
    const Eigen::VectorXcd vals = space.basis_matrix(rule.nodes) * f.coefficients;
    const double s = power_mean(std::span<const Complex>(vals.data(), static_cast<std::size_t>(vals.size())),
                                rule.weights, p);
    return {std::pow(s, 1.0 / p), 0.0, rule.size()};
  }
  const TargetFunction g = [&f](const Point& x) { return f(x); };
  return refined_torus_norm(g, space.domain().dimension(),
                            starting_grid(space.spectrum().max_abs_degree(), p, options), p, options);
}

double norm_p(const CoefficientVector& f, double p, const NormOptions& options) {
  return norm_p_value(f, p, options).value;
}

NormValue norm_p_value(const TargetFunction& g, const Domain& domain, double p, const NormOptions& options) {
  check_exponent(p);
  check(std::isfinite(p), ErrorCode::invalid_exponent, "norm_p_value of a function needs finite p");
  if (!domain.is_torus()) {
    const Quadrature rule = finite_set_rule(domain);
    const auto vals = values_at(g, rule.nodes);
    return {std::pow(power_mean(vals, rule.weights, p), 1.0 / p), 0.0, rule.size()};
  }
  std::vector<int> degrees(static_cast<std::size_t>(domain.dimension()), 0);
  return refined_torus_norm(g, domain.dimension(), starting_grid(degrees, p, options), p, options);
}

double norm_sup(const CoefficientVector& f, const NormOptions& options) {
  const Subspace& space = f.space;
  if (!space.is_torus()) {
    const Eigen::VectorXcd vals = space.values() * f.coefficients;
    return vals.cwiseAbs().maxCoeff();
  }
  const auto degrees = space.spectrum().max_abs_degree();
  std::vector<int> per_dim;
  for (int deg : degrees)
    per_dim.push_back(std::max(options.sup_grid_factor, options.sup_grid_factor * deg));
  fit_budget(per_dim, options.max_grid_nodes);
  const Quadrature grid = equispaced_grid(per_dim);
  const Eigen::VectorXcd vals = space.basis_matrix(grid.nodes) * f.coefficients;
  const Eigen::VectorXd mod = vals.cwiseAbs();

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t candidates = std::min<std::size_t>(8, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(candidates), order.end(),
                    [&](std::size_t a, std::size_t b) { return mod[a] > mod[b]; });

  double best = mod.maxCoeff();
  const std::size_t d = per_dim.size();
  const int sweeps = d == 1 ? 1 : 4;
  for (std::size_t c = 0; c < candidates; ++c) {
    Point x = grid.nodes[order[c]];
    double value = mod[order[c]];
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (std::size_t i = 0; i < d; ++i) {
        const double h = kTwoPi / per_dim[i];
        auto negative_modulus = [&](double t) {
          Point y = x;
          y[i] = t;
          return -std::abs(f(y));
        };
        const auto [t, v] = boost::math::tools::brent_find_minima(negative_modulus, x[i] - h, x[i] + h, 40);
        if (-v > value) {
          value = -v;
          x[i] = t;
        }
      }
    }
    best = std::max(best, value);
  }
  return best;
}

double discrete_norm(std::span<const Complex> values, double p, std::optional<std::span<const double>> weights) {
  check(!values.empty(), ErrorCode::invalid_sample, "discrete norm of an empty sample");
  check_exponent(p);
  if (is_infinite_exponent(p)) {
    check(!weights.has_value(), ErrorCode::unsupported, "weighted discrete norms are defined for p < inf only");
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!weights) {
    const std::vector<double> uniform(values.size(), 1.0 / static_cast<double>(values.size()));
    return std::pow(power_mean(values, uniform, p), 1.0 / p);
  }
  check(weights->size() == values.size(), ErrorCode::invalid_size, "weights and values differ in length");
  for (double w : *weights) check(w > 0, ErrorCode::invalid_weight, "weights must be strictly positive");
  return std::pow(power_mean(values, *weights, p), 1.0 / p);
}

Quadrature best_approx_grid(const Subspace& space, const NormOptions& options) {
  if (!space.is_torus()) return finite_set_rule(space.domain());
  const auto degrees = space.spectrum().max_abs_degree();
  std::vector<int> per_dim;
  for (int deg : degrees) {
    const int floor = degrees.size() == 1 ? options.best_approx_grid : options.sup_grid_factor;
    per_dim.push_back(std::max(floor, options.sup_grid_factor * deg));
  }
  fit_budget(per_dim, options.max_grid_nodes / 4);
  return equispaced_grid(per_dim);
}

BestApproximation best_approx(const Quadrature& grid, std::span<const Complex> target_values, const Subspace& space,
                              double p, const NormOptions& options) {
  check_exponent(p);
  check(target_values.size() == grid.size(), ErrorCode::invalid_target, "target values do not match the grid");
  for (const auto& v : target_values)
    check(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::invalid_target, "target is not finite");

  const Eigen::MatrixXcd phi = space.basis_matrix(grid.nodes);
  const Eigen::Map<const Eigen::VectorXcd> f(target_values.data(), static_cast<Eigen::Index>(target_values.size()));
  const Eigen::Map<const Eigen::VectorXd> w(grid.weights.data(), static_cast<Eigen::Index>(grid.weights.size()));

  BestApproximation out{CoefficientVector(space, Eigen::VectorXcd::Zero(space.size()))};
  out.grid_nodes = grid.size();
  if (is_infinite_exponent(p)) {
    const MinimaxSolution fit = minimax_fit(phi, f, options.minimax_tolerance);
    out.projection = CoefficientVector(space, fit.y);
    out.distance = fit.lower;
    out.upper = fit.upper;
    out.iterations = fit.iterations;
    out.converged = fit.converged;
    out.lower_estimate = true;
    return out;
  }
  out.lower_estimate = false;
  if (p == 2.0) {
    // Normal equations against the exact L2 Gram matrix.
    const Eigen::VectorXcd rhs = phi.adjoint() * (w.cast<Complex>().cwiseProduct(f));
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(space.gram());
    const Eigen::VectorXcd c = cod.solve(rhs);
    const Eigen::VectorXcd r = f - phi * c;
    out.projection = CoefficientVector(space, c);
    out.distance = std::sqrt(w.dot(r.cwiseAbs2()));
    out.upper = out.distance;
    return out;
  }
  const LpSolution sol = minimize_weighted_lp(phi, f, w, p, options.solver);
  out.projection = CoefficientVector(space, sol.y);
  out.distance = std::pow(sol.objective, 1.0 / p);
  out.upper = out.distance;
  out.iterations = sol.iterations;
  out.converged = sol.converged;
  return out;
}

BestApproximation best_approx(const TargetFunction& target, const Subspace& space, double p,
                              const NormOptions& options) {
  check(static_cast<bool>(target), ErrorCode::invalid_target, "target function is empty");
  const Quadrature grid = best_approx_grid(space, options);
  std::vector<Complex> vals;
  try {
    vals = values_at(target, grid.nodes);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::invalid_target, std::string("target evaluation failed: ") + e.what());
  }
  return best_approx(grid, vals, space, p, options);
}

double christoffel_sup(const Subspace& space) {
  if (space.is_torus()) return 1.0;  // sum_k |e^{i<k,x>}|^2 = N everywhere
  const Quadrature rule = finite_set_rule(space.domain());
  const Eigen::MatrixXcd psi = space.orthonormal_matrix(rule.nodes);
  const double sup = psi.rowwise().squaredNorm().maxCoeff();
  return std::sqrt(sup / static_cast<double>(space.size()));
}

std::string to_string(NikolskiiMethod method) {
  return method == NikolskiiMethod::analytic ? "analytic" : "convex";
}

NikolskiiEstimate nikolskii_constant(const Subspace& space, double q, const NormOptions& options) {
  check_exponent(q);
  check(std::isfinite(q), ErrorCode::invalid_exponent, "Nikol'skii exponent must be finite");
  const auto N = static_cast<double>(space.size());
  NikolskiiEstimate est;
  est.q = q;
  if (q == 2.0) {
    const double t = christoffel_sup(space);
    est.M = t * std::sqrt(N);
    est.B = est.M / std::sqrt(N);
    est.method = NikolskiiMethod::analytic;
    est.grid_size = space.is_torus() ? 0 : space.domain().size();
    return est;
  }

  const Quadrature rule = lp_rule(space, q, options.quadrature);
  const Eigen::MatrixXcd psi = space.orthonormal_matrix(rule.nodes);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  const Eigen::Index n = static_cast<Eigen::Index>(space.size());

  // Candidate maximizer locations.
  std::vector<Eigen::VectorXcd> anchors;
  if (space.is_torus()) {
    anchors.push_back(Eigen::VectorXcd::Ones(n));
  } else {
    const Quadrature pts = finite_set_rule(space.domain());
    const Eigen::MatrixXcd vals = space.orthonormal_matrix(pts.nodes);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(vals.rows()));
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd christoffel = vals.rowwise().squaredNorm();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return christoffel[a] > christoffel[b]; });
    if (order.size() > 256) order.resize(64);
    for (auto j : order) anchors.push_back(vals.row(j).transpose());
  }

  double best_min = kInfinity;
  Eigen::VectorXcd best_d;
  for (const auto& a : anchors) {
    const double a2 = a.squaredNorm();
    if (a2 <= 1e-300) continue;
    const Eigen::VectorXcd c0 = a.conjugate() / a2;  // a^T c0 = 1
    Eigen::VectorXcd d = c0;
    double min_norm;
    if (n == 1) {
      min_norm = std::pow(power_mean(std::span<const Complex>((psi * c0).eval().data(), rule.size()),
                                     rule.weights, q),
                          1.0 / q);
    } else {
      const Eigen::VectorXcd v = a.conjugate() / std::sqrt(a2);
      const Eigen::MatrixXcd Q = v.householderQr().householderQ();
      const Eigen::MatrixXcd Z = Q.rightCols(n - 1);
      const LpSolution sol = minimize_weighted_lp(-psi * Z, psi * c0, w, q, options.solver);
      d = c0 + Z * sol.y;
      min_norm = std::pow(sol.objective, 1.0 / q);
    }
    if (min_norm < best_min) {
      best_min = min_norm;
      best_d = d;
    }
  }
  check(std::isfinite(best_min), ErrorCode::degenerate_space, "every basis function vanishes");

  // Back to the original basis: c = L^{-T} d.
  Eigen::VectorXcd c = best_d;
  if (!space.is_torus())
    c = space.gram_factor().transpose().triangularView<Eigen::Upper>().solve(best_d);
  const CoefficientVector f(space, c);
  const double sup = std::max(space.is_torus() ? std::abs(best_d.sum()) : 0.0, norm_sup(f, options));
  est.M = sup / norm_p(f, q, options);
  est.B = est.M / std::pow(N, 1.0 / q);
  est.method = NikolskiiMethod::convex;
  est.grid_size = rule.size();
  est.extremal = c;
  return est;
}

}  // namespace sampdisc
