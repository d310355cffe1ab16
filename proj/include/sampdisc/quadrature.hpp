#pragma once

#include <span>
#include <vector>

#include "sampdisc/function_spaces.hpp"

namespace sampdisc {

/// Nodes with positive weights summing to one.
struct Quadrature {
  std::vector<Point> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Full equispaced grid on the torus, nodes 2 pi j / M_i per coordinate,
/// first coordinate varying slowest. Exact for trigonometric polynomials
/// whose degree in coordinate i is below M_i.
Quadrature equispaced_grid(std::span<const int> nodes_per_dimension);

/// All points of a finite-set domain with weights 1/S.
Quadrature finite_set_rule(const Domain& domain);

/// Number of equispaced nodes per coordinate that integrates |f|^p exactly
/// for even p: p * degree + 1.
int exact_node_count(int degree, int p_even);

struct QuadratureOptions {
  /// Nodes per unit of degree and exponent for non-even p.
  int general_p_density = 16;
  /// Upper bound on the total number of grid nodes.
  std::size_t max_nodes = std::size_t{1} << 20;
};

/// Quadrature used to evaluate ||f||_p^p for every f in the subspace: exact
/// grid for even p, dense Riemann grid otherwise, the domain itself for
/// finite sets.
Quadrature lp_rule(const Subspace& space, double p, const QuadratureOptions& options = {});

/// True if the rule reproduces the integral of every trigonometric monomial
/// e^{i<k,x>} with k in `frequencies` to the given tolerance.
bool integrates_exactly(const Quadrature& rule, std::span<const Frequency> frequencies, double tolerance);

}  // namespace sampdisc
