#include <algorithm>
#include <cmath>
#include <set>

#include "sampdisc/discretization.hpp"
#include "sampdisc/norms.hpp"
#include "sampdisc/parallel.hpp"
#include "sampdisc/random.hpp"

namespace sampdisc {

std::string to_string(CertificateMethod method) {
  switch (method) {
    case CertificateMethod::exact_eigen: return "exact-eigen";
    case CertificateMethod::exact_quadrature: return "exact-quadrature";
    case CertificateMethod::optimization_bound: return "optimization-bound";
    case CertificateMethod::brute_force: return "brute-force";
  }
  return "exact-eigen";
}

std::string to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::certified: return "certified";
    case CertificateStatus::heuristic_upper_c1: return "heuristic-upper-C1";
    case CertificateStatus::heuristic: return "heuristic";
  }
  return "heuristic";
}

namespace {

constexpr double kExactMomentTolerance = 1e-10;
constexpr std::size_t kMaxDifferenceSet = 200000;
// Exponent of the smooth surrogate for max-ratios at p = inf.
constexpr double kSupSurrogate = 64.0;

// log(sum_k w_k |(A d)_k|^p) and the real gradient of that logarithm.
struct LogPowerSum {
  double log_value = -kInfinity;
  Eigen::VectorXcd gradient;
};

double power(double u, double p, int integral) {
  if (integral < 0) return std::pow(u, p);
  double r = 1.0;
  for (int i = 0; i < integral; ++i) r *= u;
  return r;
}

LogPowerSum log_power_sum(const Eigen::MatrixXcd& A, const Eigen::VectorXd& w, const Eigen::VectorXcd& d, double p) {
  const Eigen::VectorXcd z = A * d;
  const Eigen::VectorXd a = z.cwiseAbs();
  const double top = a.maxCoeff();
  LogPowerSum out;
  out.gradient = Eigen::VectorXcd::Zero(d.size());
  if (!(top > 0)) return out;
  const int integral = p >= 2.0 && p <= 64.0 && p == std::floor(p) ? static_cast<int>(p) - 2 : -1;
  Eigen::VectorXcd pr(z.size());
  double s = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double u = a[k] / top;
    const double lower = u > 0 ? power(u, p - 2.0, integral) : 0.0;
    s += w[k] * lower * u * u;
    pr[k] = w[k] * lower * (z[k] / top);
  }
  out.log_value = p * std::log(top) + std::log(s);
  out.gradient = (p / (top * s)) * (A.adjoint() * pr);
  return out;
}

struct RatioProblem {
  Eigen::MatrixXcd numerator;
  Eigen::VectorXd numerator_weights;
  Eigen::MatrixXcd denominator;
  Eigen::VectorXd denominator_weights;
  double p = 2.0;
};

struct RatioPoint {
  double log_ratio = 0.0;
  Eigen::VectorXcd gradient;
};

RatioPoint log_ratio(const RatioProblem& prob, const Eigen::VectorXcd& d) {
  const auto num = log_power_sum(prob.numerator, prob.numerator_weights, d, prob.p);
  const auto den = log_power_sum(prob.denominator, prob.denominator_weights, d, prob.p);
  return {num.log_value - den.log_value, num.gradient - den.gradient};
}

struct DescentResult {
  Eigen::VectorXcd d;
  double ratio = 0.0;
  double gradient_norm = 0.0;
};

// Geodesic descent (or ascent) of the log-ratio on the unit sphere of C^N with
// step halving / doubling.
DescentResult descend(const RatioProblem& prob, Eigen::VectorXcd d, bool minimize, int max_iterations) {
  d.normalize();
  RatioPoint cur = log_ratio(prob, d);
  const double sense = minimize ? 1.0 : -1.0;
  double step = 0.1;
  double gn = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    if (minimize && !std::isfinite(cur.log_ratio)) break;
    Eigen::VectorXcd g = cur.gradient - (d.dot(cur.gradient)).real() * d;
    gn = g.norm();
    if (!(gn > 1e-12)) break;
    const Eigen::VectorXcd dir = (-sense / gn) * g;
    bool moved = false;
    while (step > 1e-12) {
      Eigen::VectorXcd trial = std::cos(step) * d + std::sin(step) * dir;
      trial.normalize();
      const RatioPoint next = log_ratio(prob, trial);
      if (sense * (next.log_ratio - cur.log_ratio) < 0) {
        d = trial;
        cur = next;
        step = std::min(2.0 * step, 0.5);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {d, std::exp(cur.log_ratio), gn};
}

struct SampleView {
  std::span<const Point> points;
  Eigen::VectorXd weights;
  bool weighted = false;
};

Certificate blank_certificate(const SampleView& s, double p) {
  Certificate c;
  c.p = p;
  c.m = s.points.size();
  c.weighted = s.weighted;
  c.weight_sum = s.weights.sum();
  return c;
}

// Frequencies of |f|^p for f in the span: (p/2)-fold sums minus (p/2)-fold sums.
std::optional<std::vector<Frequency>> difference_set(const Spectrum& spectrum, int half) {
  auto add = [](const Frequency& a, const Frequency& b, int sign) {
    Frequency c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + sign * b[i];
    return c;
  };
  std::set<Frequency> sums{Frequency(static_cast<std::size_t>(spectrum.dimension()), 0)};
  for (int h = 0; h < half; ++h) {
    std::set<Frequency> next;
    for (const auto& a : sums)
      for (const auto& k : spectrum.frequencies) next.insert(add(a, k, 1));
    sums = std::move(next);
    if (sums.size() * sums.size() > 50 * kMaxDifferenceSet) return std::nullopt;
  }
  std::set<Frequency> diffs;
  for (const auto& a : sums) {
    for (const auto& b : sums) {
      diffs.insert(add(a, b, -1));
      if (diffs.size() > kMaxDifferenceSet) return std::nullopt;
    }
  }
  return std::vector<Frequency>(diffs.begin(), diffs.end());
}

Certificate certify_eigen(const Subspace& space, const SampleView& s) {
  const Eigen::MatrixXcd psi = space.orthonormal_matrix(s.points);
  const Eigen::MatrixXcd frame = psi.adjoint() * s.weights.cast<Complex>().asDiagonal() * psi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(frame, Eigen::EigenvaluesOnly);
  Certificate c = blank_certificate(s, 2.0);
  const double top = eig.eigenvalues().maxCoeff();
  c.c1_pow = std::max(eig.eigenvalues().minCoeff(), 0.0);
  c.c2_pow = top;
  c.method = CertificateMethod::exact_eigen;
  c.status = CertificateStatus::certified;
  c.tolerance = 1e-13 * std::max(1.0, top) * static_cast<double>(space.size());
  return c;
}

// Starting points in orthonormal coordinates: the constant function (or the
// first basis vector), the extreme eigenvector of the p = 2 frame matrix for
// this direction, then Gaussian draws from per-restart streams.
Eigen::VectorXcd initial_point(const Subspace& space, const Eigen::MatrixXcd& frame_vectors, bool minimize,
                               int restart, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (restart == 0) {
    if (auto c = space.constant_coefficients()) {
      if (space.is_torus()) return *c;
      return space.gram_factor().transpose() * *c;
    }
    return Eigen::VectorXcd::Unit(n, 0);
  }
  if (restart == 1) return minimize ? frame_vectors.col(0) : frame_vectors.col(n - 1);
  Rng rng(derive_stream(seed, static_cast<std::uint64_t>(restart)));
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = rng.complex_normal();
  return d;
}

Eigen::MatrixXcd frame_eigenvectors(const Eigen::MatrixXcd& psi, const Eigen::VectorXd& w) {
  const Eigen::MatrixXcd frame = psi.adjoint() * w.cast<Complex>().asDiagonal() * psi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(frame);
  return eig.eigenvectors();
}

Certificate certify_general(const Subspace& space, const SampleView& s, double p, const CertifyBudget& budget) {
  const Quadrature rule = lp_rule(space, p, budget.quadrature);
  RatioProblem prob;
  prob.numerator = space.orthonormal_matrix(s.points);
  prob.numerator_weights = s.weights;
  prob.denominator = space.orthonormal_matrix(rule.nodes);
  prob.denominator_weights = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<Eigen::Index>(rule.size()));
  prob.p = p;
  const Eigen::MatrixXcd vectors = frame_eigenvectors(prob.numerator, prob.numerator_weights);

  const int restarts = std::max(budget.restarts, 1);
  std::vector<DescentResult> lows(static_cast<std::size_t>(restarts)), highs(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t r) {
    const int ri = static_cast<int>(r);
    lows[r] = descend(prob, initial_point(space, vectors, true, ri, budget.seed), true, budget.max_iterations);
    highs[r] = descend(prob, initial_point(space, vectors, false, ri, budget.seed), false, budget.max_iterations);
  });

  Certificate c = blank_certificate(s, p);
  std::size_t lo = 0, hi = 0;
  for (std::size_t r = 1; r < lows.size(); ++r) {
    if (lows[r].ratio < lows[lo].ratio) lo = r;
    if (highs[r].ratio > highs[hi].ratio) hi = r;
  }
  c.c1_pow = lows[lo].ratio;
  c.c2_pow = highs[hi].ratio;
  c.method = CertificateMethod::optimization_bound;
  c.status = CertificateStatus::heuristic_upper_c1;
  c.tolerance = std::max(lows[lo].gradient_norm, highs[hi].gradient_norm);
  return c;
}

Certificate certify_sup(const Subspace& space, const SampleView& s, const CertifyBudget& budget) {
  const NormOptions norm_options;
  Quadrature grid;
  if (space.is_torus()) {
    std::vector<int> per_dim;
    for (int deg : space.spectrum().max_abs_degree())
      per_dim.push_back(std::max(norm_options.sup_grid_factor, norm_options.sup_grid_factor * deg));
    grid = equispaced_grid(per_dim);
  } else {
    grid = finite_set_rule(space.domain());
  }
  const auto m = static_cast<Eigen::Index>(s.points.size());
  RatioProblem prob;
  prob.numerator = space.orthonormal_matrix(s.points);
  prob.numerator_weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  prob.denominator = space.orthonormal_matrix(grid.nodes);
  prob.denominator_weights = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), static_cast<Eigen::Index>(grid.size()));
  prob.p = kSupSurrogate;
  const Eigen::MatrixXcd vectors = frame_eigenvectors(prob.numerator, prob.numerator_weights);

  const int restarts = std::max(budget.restarts, 1);
  std::vector<double> ratios(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t r) {
    const auto found = descend(prob, initial_point(space, vectors, true, static_cast<int>(r), budget.seed), true,
                               budget.max_iterations);
    const double discrete = (prob.numerator * found.d).cwiseAbs().maxCoeff();
    Eigen::VectorXcd c = found.d;
    if (!space.is_torus()) c = space.gram_factor().transpose().triangularView<Eigen::Upper>().solve(found.d);
    const double sup = norm_sup(CoefficientVector(space, c), norm_options);
    ratios[r] = sup > 0 ? std::min(discrete / sup, 1.0) : 1.0;
  });

  Certificate c = blank_certificate(s, kInfinity);
  c.weighted = false;
  c.weight_sum = 1.0;
  c.c1_pow = *std::min_element(ratios.begin(), ratios.end());
  c.c2_pow = 1.0;
  c.method = CertificateMethod::optimization_bound;
  c.status = CertificateStatus::heuristic;
  c.tolerance = 1e-6;
  return c;
}

Certificate certify_impl(const Subspace& space, const SampleView& s, double p, const CertifyBudget& budget) {
  check(!s.points.empty(), ErrorCode::invalid_sample, "cannot certify an empty sample");
  check_exponent(p);
  for (const auto& x : s.points) space.domain().check_point(x);
  if (is_infinite_exponent(p)) return certify_sup(space, s, budget);
  if (p == 2.0) return certify_eigen(space, s);
  if (is_even_integer(p) && space.is_torus()) {
    if (auto diffs = difference_set(space.spectrum(), static_cast<int>(p) / 2)) {
      Quadrature rule;
      rule.nodes.assign(s.points.begin(), s.points.end());
      rule.weights.assign(s.weights.data(), s.weights.data() + s.weights.size());
      if (integrates_exactly(rule, *diffs, kExactMomentTolerance)) {
        Certificate c = blank_certificate(s, p);
        c.c1_pow = 1.0;
        c.c2_pow = 1.0;
        c.method = CertificateMethod::exact_quadrature;
        c.status = CertificateStatus::certified;
        c.tolerance = kExactMomentTolerance;
        return c;
      }
    }
  }
  return certify_general(space, s, p, budget);
}

}  // namespace

Certificate certify(const Subspace& space, const PointSet& sample, double p, const CertifyBudget& budget) {
  SampleView s;
  s.points = sample.points;
  const auto m = static_cast<Eigen::Index>(sample.size());
  s.weights = Eigen::VectorXd::Constant(m, m > 0 ? 1.0 / static_cast<double>(m) : 0.0);
  s.weighted = false;
  return certify_impl(space, s, p, budget);
}

Certificate certify(const Subspace& space, const WeightedPointSet& sample, double p, const CertifyBudget& budget) {
  SampleView s;
  s.points = sample.points.points;
  s.weights = Eigen::Map<const Eigen::VectorXd>(sample.weights.data(), static_cast<Eigen::Index>(sample.weights.size()));
  s.weighted = true;
  return certify_impl(space, s, p, budget);
}

}  // namespace sampdisc
