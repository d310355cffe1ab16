#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sampdisc/discretization.hpp"
#include "sampdisc/parallel.hpp"

namespace sampdisc {

namespace {

constexpr std::size_t kMaxSweep = 250000;
constexpr std::size_t kZoomCandidates = 8;

// Unit coefficient vectors modulo a global phase. Coordinates are N-1 angles
// theta in [0, pi/2] followed by N-1 phases phi in [0, 2 pi).
Eigen::VectorXcd unit_vector(std::span<const double> coords, std::size_t n) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(n));
  const std::size_t k = n - 1;
  double tail = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = tail;
    if (i < k) {
      r *= std::cos(coords[i]);
      tail *= std::sin(coords[i]);
    }
    const double phase = i == 0 ? 0.0 : coords[k + i - 1];
    c[static_cast<Eigen::Index>(i)] = std::polar(r, phase);
  }
  return c;
}

struct Oracle {
  Eigen::MatrixXcd sample_basis;
  Eigen::MatrixXcd grid_basis;
  Eigen::VectorXd grid_weights;
  double p = 2.0;
  std::size_t n = 1;

  double ratio(std::span<const double> coords) const {
    const Eigen::VectorXcd c = unit_vector(coords, n);
    const Eigen::VectorXd s = (sample_basis * c).cwiseAbs().array().pow(p);
    const Eigen::VectorXd g = (grid_basis * c).cwiseAbs().array().pow(p);
    const double continuous = grid_weights.dot(g);
    if (!(continuous > 0)) return kInfinity;
    return s.mean() / continuous;
  }
};

std::vector<double> axis_values(std::size_t axis, std::size_t angles, int r) {
  std::vector<double> v;
  const double h = kPi / (2.0 * r);
  if (axis < angles) {
    for (int i = 0; i <= r; ++i) v.push_back(i * h);
  } else {
    for (int i = 0; i < 4 * r; ++i) v.push_back(i * h);
  }
  return v;
}

double clamp_coord(double v, std::size_t axis, std::size_t angles) {
  if (axis < angles) return std::clamp(v, 0.0, kPi / 2.0);
  return v;
}

struct Found {
  std::vector<double> coords;
  double value;
};

// Coordinate-stencil pattern search on grids of halving spacing, from h0
// down to h_final. Returns the best point on the final grid neighbourhood.
Found zoom(const Oracle& oracle, Found start, double h0, double h_final, bool minimize, std::size_t angles) {
  const std::size_t dims = start.coords.size();
  std::size_t stencil = 1;
  for (std::size_t i = 0; i < dims; ++i) stencil *= 3;
  auto better = [&](double a, double b) { return minimize ? a < b : a > b; };
  double h = h0;
  while (true) {
    h = std::max(h * 0.5, h_final);
    bool moved = true;
    while (moved) {
      moved = false;
      Found best = start;
      std::vector<double> trial(dims);
      for (std::size_t s = 0; s < stencil; ++s) {
        std::size_t code = s;
        for (std::size_t a = 0; a < dims; ++a) {
          const int step = static_cast<int>(code % 3) - 1;
          code /= 3;
          trial[a] = clamp_coord(start.coords[a] + step * h, a, angles);
        }
        const double v = oracle.ratio(trial);
        if (better(v, best.value)) best = {trial, v};
      }
      if (better(best.value, start.value)) {
        start = best;
        moved = true;
      }
    }
    if (h <= h_final) break;
  }
  return start;
}

double axis_variation(const Oracle& oracle, const Found& f, double h, std::size_t angles) {
  double worst = 0.0;
  std::vector<double> trial = f.coords;
  for (std::size_t a = 0; a < trial.size(); ++a) {
    for (int sign : {-1, 1}) {
      trial[a] = clamp_coord(f.coords[a] + sign * h, a, angles);
      worst = std::max(worst, std::abs(oracle.ratio(trial) - f.value));
    }
    trial[a] = f.coords[a];
  }
  return worst;
}

Quadrature oracle_grid(const Subspace& space, double p, int factor) {
  if (!space.is_torus()) return finite_set_rule(space.domain());
  std::vector<int> per_dim;
  for (int deg : space.spectrum().max_abs_degree())
    per_dim.push_back(factor * std::max(64, 8 * (static_cast<int>(std::ceil(p)) + 1) * deg + 1));
  return equispaced_grid(per_dim);
}

Oracle make_oracle(const Subspace& space, const PointSet& sample, double p, int grid_factor) {
  const Quadrature grid = oracle_grid(space, p, grid_factor);
  Oracle o;
  o.sample_basis = space.basis_matrix(sample.points);
  o.grid_basis = space.basis_matrix(grid.nodes);
  o.grid_weights = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), static_cast<Eigen::Index>(grid.size()));
  o.p = p;
  o.n = space.size();
  return o;
}

// Rounding allowance for sums of m terms in double precision.
double rounding_allowance(std::size_t m, double scale) {
  return 64 * std::numeric_limits<double>::epsilon() * static_cast<double>(m) * std::max(1.0, scale);
}

}  // namespace

Certificate brute_force_certificate(const Subspace& space, const PointSet& sample, double p, int resolution) {
  check(space.size() <= 3, ErrorCode::oracle_too_large, "the sweep oracle supports N <= 3");
  check(sample.size() >= 1, ErrorCode::invalid_sample, "cannot certify an empty sample");
  check_exponent(p);
  check(!is_infinite_exponent(p), ErrorCode::unsupported, "the sweep oracle needs a finite exponent");
  check(resolution >= 1, ErrorCode::invalid_size, "resolution must be positive");
  for (const auto& x : sample.points) space.domain().check_point(x);

  const Oracle oracle = make_oracle(space, sample, p, 1);
  const std::size_t n = space.size();
  const std::size_t angles = n - 1;
  const std::size_t dims = 2 * angles;

  Certificate cert;
  cert.p = p;
  cert.m = sample.size();
  cert.method = CertificateMethod::brute_force;
  cert.status = CertificateStatus::certified;
  cert.weighted = false;
  cert.weight_sum = 1.0;
  if (dims == 0) {
    cert.c1_pow = cert.c2_pow = oracle.ratio({});
    cert.tolerance = rounding_allowance(sample.size(), cert.c2_pow);
    return cert;
  }

  // Largest coarse resolution whose full sweep fits the budget.
  auto sweep_size = [&](int r) {
    double total = 1.0;
    for (std::size_t a = 0; a < dims; ++a) total *= static_cast<double>(axis_values(a, angles, r).size());
    return total;
  };
  int coarse = resolution;
  while (coarse > 1 && sweep_size(coarse) > static_cast<double>(kMaxSweep)) --coarse;

  std::vector<std::vector<double>> axes;
  std::size_t total = 1;
  for (std::size_t a = 0; a < dims; ++a) {
    axes.push_back(axis_values(a, angles, coarse));
    total *= axes.back().size();
  }
  auto coords_of = [&](std::size_t index) {
    std::vector<double> c(dims);
    for (std::size_t a = dims; a-- > 0;) {
      c[a] = axes[a][index % axes[a].size()];
      index /= axes[a].size();
    }
    return c;
  };
  std::vector<double> values(total);
  parallel_for(total, [&](std::size_t i) { values[i] = oracle.ratio(coords_of(i)); });

  const double h_final = kPi / (2.0 * resolution);
  const double h_coarse = kPi / (2.0 * coarse);
  auto extreme = [&](bool minimize) {
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(kZoomCandidates, total);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return minimize ? values[a] < values[b] : values[a] > values[b];
                      });
    Found best{coords_of(order[0]), values[order[0]]};
    if (coarse < resolution) {
      std::vector<Found> refined(keep);
      parallel_for(keep, [&](std::size_t k) {
        refined[k] = zoom(oracle, {coords_of(order[k]), values[order[k]]}, h_coarse, h_final, minimize, angles);
      });
      best = refined[0];
      for (const auto& f : refined)
        if (minimize ? f.value < best.value : f.value > best.value) best = f;
    }
    return best;
  };
  const Found lo = extreme(true);
  const Found hi = extreme(false);

  // Tolerance: variation within one grid step plus the change under a
  // twice-as-fine quadrature of the continuous norm.
  const Oracle fine = make_oracle(space, sample, p, 2);
  double tol = std::max(axis_variation(oracle, lo, h_final, angles), axis_variation(oracle, hi, h_final, angles));
  tol += std::max(std::abs(fine.ratio(lo.coords) - lo.value), std::abs(fine.ratio(hi.coords) - hi.value));

  tol += rounding_allowance(sample.size(), hi.value);

  cert.c1_pow = lo.value;
  cert.c2_pow = hi.value;
  cert.tolerance = tol;
  return cert;
}

}  // namespace sampdisc
