#include "sampdisc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace sampdisc {

Quadrature equispaced_grid(std::span<const int> nodes_per_dimension) {
  std::vector<std::vector<Point>> axes;
  std::size_t total = 1;
  for (int m : nodes_per_dimension) {
    check(m >= 1, ErrorCode::invalid_size, "grid needs at least one node per coordinate");
    std::vector<Point> axis;
    axis.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) axis.push_back({kTwoPi * j / m});
    axes.push_back(std::move(axis));
    total *= static_cast<std::size_t>(m);
  }
  Quadrature q;
  q.nodes = cartesian_product(axes);
  q.weights.assign(total, 1.0 / static_cast<double>(total));
  return q;
}

Quadrature finite_set_rule(const Domain& domain) {
  check(!domain.is_torus(), ErrorCode::unsupported_domain, "finite_set_rule needs a finite-set domain");
  Quadrature q;
  const std::size_t S = domain.size();
  for (std::size_t j = 0; j < S; ++j) q.nodes.push_back({static_cast<double>(j)});
  q.weights.assign(S, 1.0 / static_cast<double>(S));
  return q;
}

int exact_node_count(int degree, int p_even) { return p_even * degree + 1; }

Quadrature lp_rule(const Subspace& space, double p, const QuadratureOptions& options) {
  check_exponent(p);
  if (!space.is_torus()) return finite_set_rule(space.domain());
  const auto degrees = space.spectrum().max_abs_degree();
  const std::size_t d = degrees.size();
  std::vector<int> per_dim(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (is_even_integer(p)) {
      per_dim[i] = exact_node_count(degrees[i], static_cast<int>(p));
    } else {
      const int base = options.general_p_density * (static_cast<int>(std::ceil(p)) + 1);
      per_dim[i] = base * std::max(1, degrees[i]) + 1;
    }
  }
  if (!is_even_integer(p)) {
    // Shrink uniformly until the grid fits the node budget.
    auto total = [&] {
      double t = 1;
      for (int m : per_dim) t *= m;
      return t;
    };
    while (total() > static_cast<double>(options.max_nodes)) {
      for (auto& m : per_dim) m = std::max(2 * (m / 3) + 1, 3);
    }
  }
  return equispaced_grid(per_dim);
}

bool integrates_exactly(const Quadrature& rule, std::span<const Frequency> frequencies, double tolerance) {
  for (const auto& k : frequencies) {
    Complex moment = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
      double phase = 0.0;
      for (std::size_t c = 0; c < k.size(); ++c) phase += k[c] * rule.nodes[j][c];
      moment += rule.weights[j] * std::polar(1.0, phase);
    }
    const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
    if (std::abs(moment - (zero ? 1.0 : 0.0)) > tolerance) return false;
  }
  return true;
}

}  // namespace sampdisc
