#include "sampdisc/lp_solver.hpp"

#include <algorithm>
#include <cmath>

#include "sampdisc/common.hpp"

namespace sampdisc {

namespace {

Eigen::VectorXd moduli(const Eigen::VectorXcd& r) { return r.cwiseAbs(); }

// |r|^{p-2} r, taken as 0 at r = 0.
Eigen::VectorXcd power_residual(const Eigen::VectorXcd& r, double p) {
  Eigen::VectorXcd out(r.size());
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    const double a = std::abs(r[k]);
    out[k] = a > 0 ? std::pow(a, p - 2.0) * r[k] : Complex(0.0);
  }
  return out;
}

double objective_value(const Eigen::VectorXcd& r, const Eigen::VectorXd& w, double p) {
  double f = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) f += w[k] * std::pow(std::abs(r[k]), p);
  return f;
}

double optimality_measure(double value, const Eigen::VectorXcd& gradient, double p) {
  if (value <= 0.0) return 0.0;
  return std::pow(value, 1.0 / p - 1.0) / p * gradient.norm();
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size() / 2;
  Eigen::VectorXcd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = Complex(v[i], v[n + i]);
  return out;
}

Eigen::VectorXd to_real(const Eigen::VectorXcd& v) {
  const Eigen::Index n = v.size();
  Eigen::VectorXd out(2 * n);
  out.head(n) = v.real();
  out.tail(n) = v.imag();
  return out;
}

}  // namespace

LpObjective weighted_lp_objective(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& w,
                                  double p, const Eigen::VectorXcd& y) {
  const Eigen::VectorXcd r = b - A * y;
  LpObjective out;
  out.value = objective_value(r, w, p);
  out.gradient = -p * (A.adjoint() * (w.cast<Complex>().cwiseProduct(power_residual(r, p))));
  return out;
}

LpSolution solve_weighted_l2(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& w) {
  check(A.rows() == b.size() && A.rows() == w.size(), ErrorCode::invalid_size, "weighted l2: size mismatch");
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXcd As = sw.cast<Complex>().asDiagonal() * A;
  const Eigen::VectorXcd bs = sw.cast<Complex>().cwiseProduct(b);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(As);
  LpSolution out;
  out.y = cod.solve(bs);
  out.rank_deficient = cod.rank() < A.cols();
  const auto obj = weighted_lp_objective(A, b, w, 2.0, out.y);
  out.objective = obj.value;
  out.optimality = optimality_measure(obj.value, obj.gradient, 2.0);
  out.converged = true;
  return out;
}

LpSolution minimize_weighted_lp(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& w,
                                double p, const LpSolverOptions& options) {
  check_exponent(p);
  check(std::isfinite(p), ErrorCode::invalid_exponent, "use minimax_fit for p = inf");
  for (Eigen::Index k = 0; k < w.size(); ++k)
    check(w[k] > 0, ErrorCode::invalid_weight, "weights must be positive");

  LpSolution sol = solve_weighted_l2(A, b, w);
  if (p == 2.0) return sol;
  sol.converged = false;

  const Eigen::Index n = A.cols();
  const Eigen::Index K = A.rows();
  Eigen::MatrixXd E1(K, 2 * n), E2(K, 2 * n);
  E1 << A.real(), -A.imag();
  E2 << A.imag(), A.real();

  Eigen::VectorXcd y = sol.y;
  auto eval = [&](const Eigen::VectorXcd& yy) { return weighted_lp_objective(A, b, w, p, yy); };
  LpObjective cur = eval(y);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double measure = optimality_measure(cur.value, cur.gradient, p);
    if (measure <= options.optimality_tolerance) {
      sol.converged = true;
      break;
    }
    const Eigen::VectorXcd r = b - A * y;
    Eigen::VectorXd m11(K), m12(K), m22(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double s = std::max(std::abs(r[k]), options.residual_floor);
      const double scale = w[k] * p * std::pow(s, p - 2.0);
      const double u1 = r[k].real() / s, u2 = r[k].imag() / s;
      m11[k] = scale * (1.0 + (p - 2.0) * u1 * u1);
      m12[k] = scale * (p - 2.0) * u1 * u2;
      m22[k] = scale * (1.0 + (p - 2.0) * u2 * u2);
    }
    Eigen::MatrixXd H = E1.transpose() * m11.asDiagonal() * E1 + E1.transpose() * m12.asDiagonal() * E2 +
                        E2.transpose() * m12.asDiagonal() * E1 + E2.transpose() * m22.asDiagonal() * E2;
    H.diagonal().array() += 1e-14 * std::max(H.diagonal().maxCoeff(), 1e-300);
    const Eigen::VectorXd g = to_real(cur.gradient);

    auto line_search = [&](const Eigen::VectorXd& dir) -> bool {
      const double slope = g.dot(dir);
      if (!(slope < 0)) return false;
      const Eigen::VectorXcd step = to_complex(dir);
      for (double t = 1.0; t > 1e-12; t *= 0.5) {
        const Eigen::VectorXcd trial = y + t * step;
        const LpObjective next = eval(trial);
        if (next.value <= cur.value + 1e-4 * t * slope) {
          y = trial;
          cur = next;
          return true;
        }
      }
      return false;
    };

    const Eigen::VectorXd newton = H.ldlt().solve(-g);
    if (newton.allFinite() && line_search(newton)) continue;
    const double gg = g.squaredNorm();
    if (gg > 0 && line_search(-g * (cur.value / gg))) continue;
    break;
  }
  sol.y = y;
  sol.objective = cur.value;
  sol.optimality = optimality_measure(cur.value, cur.gradient, p);
  sol.iterations = it;
  sol.converged = sol.converged || sol.optimality <= options.optimality_tolerance;
  return sol;
}

MinimaxSolution minimax_fit(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double relative_tolerance,
                            int max_iterations) {
  const Eigen::Index K = A.rows();
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(K, 1.0 / static_cast<double>(K));
  MinimaxSolution best;
  best.upper = kInfinity;
  best.lower = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    // Weighted LS over the support of lambda; zero weights drop out.
    const Eigen::MatrixXcd G = A.adjoint() * lambda.cast<Complex>().asDiagonal() * A;
    const Eigen::VectorXcd rhs = A.adjoint() * lambda.cast<Complex>().cwiseProduct(b);
    const Eigen::VectorXcd y = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(G).solve(rhs);
    const Eigen::VectorXcd r = b - A * y;
    const Eigen::VectorXd a = moduli(r);
    const double upper = a.maxCoeff();
    const double lower = std::sqrt(lambda.dot(a.cwiseAbs2()));
    best.iterations = it + 1;
    if (upper < best.upper) {
      best.upper = upper;
      best.y = y;
    }
    best.lower = std::max(best.lower, std::min(lower, best.upper));
    if (best.upper - best.lower <= relative_tolerance * best.upper) {
      best.converged = true;
      break;
    }
    const Eigen::VectorXd next = lambda.cwiseProduct(a);
    const double total = next.sum();
    if (!(total > 0)) break;
    lambda = next / total;
    // Weights off the extremal set decay geometrically; flushing them keeps
    // the arithmetic out of the subnormal range.
    const double floor = 1e-30 * lambda.maxCoeff();
    for (double& l : lambda) l = l < floor ? 0.0 : l;
  }
  return best;
}

}  // namespace sampdisc
