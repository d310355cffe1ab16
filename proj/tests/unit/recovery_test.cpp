#include <cmath>
#include <memory>

#include "doctest.h"
#include "helpers.hpp"
#include "sampdisc/lp_solver.hpp"
#include "sampdisc/recovery.hpp"

using namespace sampdisc;
using testing_helpers::code_of;
using testing_helpers::trig1;

namespace {

std::shared_ptr<const std::vector<Point>> shared(const PointSet& p) {
  return std::make_shared<const std::vector<Point>>(p.points);
}

std::vector<double> uniform(std::size_t m) { return std::vector<double>(m, 1.0 / static_cast<double>(m)); }

const TargetFunction kCos2 = [](const Point& x) { return Complex(std::cos(2 * x[0])); };

}  // namespace

TEST_CASE("members are recovered exactly") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 2));
  const PointSet pts = generate_iid(s.domain(), 11, 6);
  const CoefficientVector f(s, testing_helpers::random_coefficients(5, 3));
  for (double p : {1.5, 2.0, 3.0, 4.0, kInfinity}) {
    const RecoveryResult r = lpw_recover(sample(f, shared(pts)), s, p, uniform(11));
    CHECK((r.coefficients.coefficients - f.coefficients).norm() <= 1e-8);
    CHECK(r.discrete_residual <= 1e-10);
  }
}

TEST_CASE("functions vanishing on the nodes are invisible") {
  const Subspace s = trig1({-1, 0, 1});
  const PointSet pts = generate_equispaced(s.domain(), 5);
  const CoefficientVector u(s, testing_helpers::random_coefficients(3, 2));
  // e^{5ix} - 1 vanishes on the 5 equispaced nodes.
  const TargetFunction f = [&u](const Point& x) { return u(x) + std::polar(1.0, 5 * x[0]) - 1.0; };
  for (double p : {2.0, 4.0}) {
    const RecoveryResult r = lpw_recover(sample(f, shared(pts)), s, p, uniform(5));
    CHECK((r.coefficients.coefficients - u.coefficients).norm() <= 1e-9);
  }
}

TEST_CASE("cos 2x projects to zero on 9 equispaced nodes") {
  const Subspace s = trig1({-1, 0, 1});
  const PointSet pts = generate_equispaced(s.domain(), 9);
  const RecoveryResult r = lpw_recover(sample(kCos2, shared(pts)), s, 2.0, uniform(9));
  CHECK(r.coefficients.coefficients.norm() <= 1e-14);
  CHECK_FALSE(r.degenerate);

  // Normal-equation cross-check.
  const Eigen::MatrixXcd A = s.basis_matrix(pts.points);
  Eigen::VectorXcd b(9);
  for (int j = 0; j < 9; ++j) b[j] = kCos2(pts.points[j]);
  const Eigen::VectorXcd y = (A.adjoint() * A).ldlt().solve(A.adjoint() * b);
  CHECK(y.norm() <= 1e-14);
}

TEST_CASE("recovery bound constants") {
  Certificate c;
  c.p = 2.0;
  c.c1_pow = 1.0;
  c.c2_pow = 1.0;
  c.m = 4;
  CHECK(recovery_bound(c, uniform(4), 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  c.c1_pow = 0.5;
  CHECK(recovery_bound(c, uniform(4), 2.0) == doctest::Approx(2 * std::sqrt(2.0) + 1).epsilon(1e-14));
  c.p = 4.0;
  c.c1_pow = 1.0 / 16;
  CHECK(recovery_bound(c, uniform(4), 4.0) == doctest::Approx(5.0).epsilon(1e-14));

  Certificate h = c;
  h.status = CertificateStatus::heuristic_upper_c1;
  CHECK(code_of([&] { recovery_bound(h, uniform(4), 4.0); }) == ErrorCode::refused_heuristic);
  Certificate z = c;
  z.c1_pow = 0.0;
  CHECK(code_of([&] { recovery_bound(z, uniform(4), 4.0); }) == ErrorCode::unbounded);
  CHECK(code_of([&] { recovery_bound(c, std::vector<double>{0.5, 0.2, 0.2, 0.1}, 4.0); }) ==
        ErrorCode::invalid_weight);
  CHECK(code_of([&] { recovery_bound(c, uniform(4), 2.0); }) == ErrorCode::invalid_exponent);

  Certificate w = c;
  w.weighted = true;
  w.p = 2.0;
  w.c1_pow = 0.25;
  // C1 = 1/2, C2 = 2: 2 * 2 * sqrt(2) + 1.
  CHECK(recovery_bound(w, std::vector<double>{1.0, 1.0}, 2.0) ==
        doctest::Approx(4 * std::sqrt(2.0) + 1).epsilon(1e-14));
}

TEST_CASE("p = 2 recovery is linear and idempotent") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 3));
  const PointSet pts = generate_iid(s.domain(), 30, 8);
  const auto src = shared(pts);
  const TargetFunction f = [](const Point& x) { return Complex(std::exp(std::cos(x[0])), 0.0); };
  const TargetFunction g = [](const Point& x) { return Complex(std::abs(std::sin(x[0])), x[0]); };
  const Complex alpha(1.3, -0.2), beta(-0.7, 2.0);
  const TargetFunction h = [&](const Point& x) { return alpha * f(x) + beta * g(x); };
  const auto w = uniform(30);
  const RecoveryResult rf = lpw_recover(sample(f, src), s, 2.0, w);
  const RecoveryResult rg = lpw_recover(sample(g, src), s, 2.0, w);
  const RecoveryResult rh = lpw_recover(sample(h, src), s, 2.0, w);
  const Eigen::VectorXcd combo = alpha * rf.coefficients.coefficients + beta * rg.coefficients.coefficients;
  CHECK((rh.coefficients.coefficients - combo).norm() <= 1e-10);

  for (double p : {2.0, 4.0}) {
    const RecoveryResult once = lpw_recover(sample(f, src), s, p, w);
    const RecoveryResult twice = lpw_recover(sample(once.coefficients, src), s, p, w);
    CHECK((twice.coefficients.coefficients - once.coefficients.coefficients).norm() <= 1e-10);
  }
}

TEST_CASE("p = 2 residual is orthogonal to the sampled subspace") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 2));
  const PointSet pts = generate_iid(s.domain(), 25, 12);
  Rng rng(3);
  std::vector<double> w(25);
  for (double& x : w) x = 0.01 + rng.uniform();
  const TargetFunction f = [](const Point& x) { return Complex(std::exp(std::sin(3 * x[0]))); };
  const SampleVector sv = sample(f, shared(pts));
  const RecoveryResult r = lpw_recover(sv, s, 2.0, w);
  const Eigen::MatrixXcd A = s.basis_matrix(pts.points);
  const Eigen::Map<const Eigen::VectorXcd> b(sv.values.data(), 25);
  const Eigen::VectorXcd res = b - A * r.coefficients.coefficients;
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), 25);
  const Eigen::VectorXcd ip = A.adjoint() * wv.asDiagonal() * res;
  CHECK(ip.norm() <= 1e-9);
}

TEST_CASE("weights do not matter for exact members") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 2));
  const PointSet pts = generate_iid(s.domain(), 9, 14);
  const CoefficientVector f(s, testing_helpers::random_coefficients(5, 15));
  Rng rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> w(9);
    for (double& x : w) x = 0.001 + 10 * rng.uniform();
    for (double p : {2.0, 3.0}) {
      const RecoveryResult r = lpw_recover(sample(f, shared(pts)), s, p, w);
      CHECK((r.coefficients.coefficients - f.coefficients).norm() <= 1e-8);
    }
  }
}

TEST_CASE("p = 4 minimizer beats random perturbations") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 2));
  const PointSet pts = generate_iid(s.domain(), 17, 18);
  const TargetFunction f = [](const Point& x) { return Complex(std::abs(std::cos(x[0])), 0.0); };
  const SampleVector sv = sample(f, shared(pts));
  const auto w = uniform(17);
  const RecoveryResult r = lpw_recover(sv, s, 4.0, w);
  CHECK(r.converged);
  CHECK(r.gradient_norm <= 1e-8);
  const Eigen::MatrixXcd A = s.basis_matrix(pts.points);
  const Eigen::Map<const Eigen::VectorXcd> b(sv.values.data(), 17);
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), 17);
  const Eigen::VectorXcd y = r.coefficients.coefficients;
  const double best = weighted_lp_objective(A, b, wv, 4.0, y).value;
  Rng rng(19);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXcd d(5);
    for (auto& v : d) v = rng.complex_normal();
    d *= std::pow(10.0, -1 - 3 * rng.uniform());
    CHECK(weighted_lp_objective(A, b, wv, 4.0, y + d).value >= best);
  }
}

TEST_CASE("rank-deficient p = 2 systems return the minimum-norm solution") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 2));
  const PointSet pts = generate_equispaced(s.domain(), 3);
  const RecoveryResult r = lpw_recover(sample(kCos2, shared(pts)), s, 2.0, uniform(3));
  CHECK(r.degenerate);
  CHECK(r.discrete_residual <= 1e-12);
}

TEST_CASE("recovery input validation") {
  const Subspace s = trig1({0, 1});
  const PointSet pts = generate_equispaced(s.domain(), 3);
  SampleVector bare;
  bare.values = {1.0, 2.0, 3.0};
  CHECK(code_of([&] { lpw_recover(bare, s, 2.0, uniform(3)); }) == ErrorCode::invalid_sample);
  CHECK(code_of([&] { lpw_recover(sample(kCos2, shared(pts)), s, 2.0, uniform(2)); }) == ErrorCode::invalid_size);
  CHECK(code_of([&] { lpw_recover(sample(kCos2, shared(pts)), s, 0.5, uniform(3)); }) ==
        ErrorCode::invalid_exponent);
}

TEST_CASE("error bound: exact members") {
  const Subspace s = make_trig_space(1, cube_spectrum(1, 2));
  const CoefficientVector f(s, testing_helpers::random_coefficients(5, 20));
  const TargetFunction g = [&f](const Point& x) { return f(x); };
  const RecoveryBoundReport r =
      verify_recovery(g, s, WeightedPointSet::uniform(generate_equispaced(s.domain(), 7)), 2.0);
  CHECK(r.lhs <= 1e-9);
  CHECK(r.holds);
}

TEST_CASE("error bound: the cos 2x anchor") {
  const Subspace s = trig1({-1, 0, 1});
  const WeightedPointSet pts = WeightedPointSet::uniform(generate_equispaced(s.domain(), 9));
  const RecoveryBoundReport r = verify_recovery(kCos2, s, pts, 2.0);
  CHECK(r.lhs == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(r.bound_constant == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.d_inf == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.d_inf <= 1.0 + 1e-12);
  CHECK(r.rhs == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(r.holds);
  CHECK_FALSE(r.advisory);

  const RecoveryBoundReport r4 = verify_recovery(kCos2, s, pts, 4.0);
  CHECK(r4.certificate.status == CertificateStatus::certified);
  CHECK(r4.bound_constant == doctest::Approx(2 * std::pow(r4.certificate.c1_pow, -0.25) + 1).epsilon(1e-12));
  CHECK(r4.lhs == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-6));
  CHECK(r4.holds);

  const RecoveryBoundReport rinf = verify_recovery(kCos2, s, pts, kInfinity);
  CHECK(rinf.advisory);
  CHECK(rinf.certificate.c2_pow == 1.0);
}

TEST_CASE("error bound refuses heuristic constants") {
  const Subspace s = trig1({-1, 0, 1});
  CertifyBudget small;
  small.restarts = 4;
  RecoveryOptions o;
  o.certify_budget = small;
  CHECK(code_of([&] {
          verify_recovery(kCos2, s, WeightedPointSet::uniform(generate_iid(s.domain(), 8, 1)), 3.0, o);
        }) == ErrorCode::refused_heuristic);
}

TEST_CASE("error bound holds on random instances at p = 2") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Subspace s = make_trig_space(1, cube_spectrum(1, 1 + static_cast<int>(seed % 3)));
    const PointSet pts = generate_iid(s.domain(), 6 * s.size(), seed);
    const double shift = static_cast<double>(seed);
    const TargetFunction f = [shift](const Point& x) { return Complex(std::exp(std::cos(x[0] - shift)), 0.0); };
    const RecoveryBoundReport r = verify_recovery(f, s, WeightedPointSet::uniform(pts), 2.0);
    CHECK(r.holds);
    CHECK(r.lhs <= r.rhs * 1.05);
  }
}
