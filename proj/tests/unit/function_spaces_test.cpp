#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sampdisc/discretization.hpp"
#include "sampdisc/quadrature.hpp"

using namespace sampdisc;
using testing_helpers::code_of;
using testing_helpers::trig1;

TEST_CASE("trig space from a symmetric spectrum contains constants") {
  const Subspace s = trig1({-1, 0, 1});
  CHECK(s.size() == 3);
  CHECK(s.contains_constant());
  CHECK(s.label() == "trig");
}

TEST_CASE("two-dimensional trig space") {
  const Subspace s = make_trig_space(2, Spectrum{{{0, 0}, {1, 0}, {0, 1}}, std::nullopt});
  CHECK(s.size() == 3);
  CHECK(s.domain().dimension() == 2);
  CHECK(s.contains_constant());
}

TEST_CASE("duplicate frequencies are rejected") {
  CHECK(code_of([] { trig1({1, 1}); }) == ErrorCode::invalid_spectrum);
  CHECK(code_of([] { make_trig_space(1, Spectrum{}); }) == ErrorCode::invalid_spectrum);
  CHECK(code_of([] { make_trig_space(2, Spectrum{{{0, 0}, {1}}, std::nullopt}); }) == ErrorCode::invalid_spectrum);
}

TEST_CASE("lacunary spectra") {
  const Subspace s = make_lacunary_space(3, 2.0);
  REQUIRE(s.size() == 3);
  CHECK(s.spectrum().frequencies == std::vector<Frequency>{{1}, {2}, {4}});
  CHECK_FALSE(s.contains_constant());
  CHECK(s.label() == "lacunary");
  CHECK(make_lacunary_space(1, 2.0).spectrum().frequencies == std::vector<Frequency>{{1}});
  const Subspace t = make_lacunary_space(5, 1.5);
  CHECK(t.spectrum().frequencies == std::vector<Frequency>{{1}, {2}, {3}, {5}, {8}});
  CHECK(code_of([] { make_lacunary_space(2, 1.0); }) == ErrorCode::invalid_ratio);
}

TEST_CASE("tensor products") {
  const Subspace a = trig1({-1, 0, 1});
  const Subspace t = tensor_product({a, a});
  CHECK(t.size() == 9);
  CHECK(t.domain().dimension() == 2);
  CHECK(t.contains_constant());
  CHECK(t.factors().size() == 2);

  const Subspace b = trig1({-2, -1, 0, 1, 2});
  CHECK(tensor_product({a, b}).size() == 15);
  CHECK_FALSE(tensor_product({a, trig1({1, 2})}).contains_constant());

  const Subspace f = make_finite_space(Eigen::MatrixXcd::Identity(2, 2));
  CHECK(code_of([&] { tensor_product({f, a}); }) == ErrorCode::unsupported_domain);
  CHECK(code_of([&] { tensor_product({a}); }) == ErrorCode::unsupported_domain);
}

TEST_CASE("evaluate matches analytic values") {
  const Subspace one = trig1({1});
  CHECK(std::abs(CoefficientVector(one, {1.0})({0.0}) - Complex(1.0)) < 1e-15);
  const Subspace two = trig1({-1, 1});
  CHECK(std::abs(CoefficientVector(two, {1.0, 1.0})({kPi / 2})) < 1e-15);
  CHECK(code_of([&] { CoefficientVector(two, {1.0, 1.0})({0.0, 1.0}); }) == ErrorCode::invalid_point);
}

TEST_CASE("evaluate agrees with direct summation at random points") {
  const Subspace s = make_trig_space(2, cube_spectrum(2, 2));
  const Eigen::VectorXcd c = testing_helpers::random_coefficients(s.size(), 11);
  const CoefficientVector f(s, c);
  Rng rng(5);
  std::vector<Point> pts;
  for (int j = 0; j < 5; ++j) pts.push_back({kTwoPi * rng.uniform(), kTwoPi * rng.uniform()});
  const auto vals = evaluate(f, pts);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto ref = testing_helpers::direct_sum(s.spectrum(), c, pts[j]);
    CHECK(std::abs(vals[j] - Complex(static_cast<double>(ref.real()), static_cast<double>(ref.imag()))) < 1e-12);
  }
}

TEST_CASE("Gram matrices") {
  CHECK((gram_matrix(trig1({-1, 0, 1})) - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
  const Subspace a = trig1({-1, 0, 1});
  const Subspace t = tensor_product({a, trig1({0, 3})});
  CHECK((gram_matrix(t) - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-14);

  // Hand-computed averages over S = 4 points.
  Eigen::MatrixXcd v(4, 2);
  v << 1.0, 2.0, 0.0, 1.0, Complex(0, 1), 1.0, -1.0, 0.0;
  const Eigen::MatrixXcd g = gram_matrix(make_finite_space(v));
  CHECK(std::abs(g(0, 0) - Complex(0.75)) < 1e-15);
  CHECK(std::abs(g(1, 1) - Complex(1.5)) < 1e-15);
  // <u_0, u_1> = (1/4) sum u_0 conj(u_1) = (2 + i) / 4.
  CHECK(std::abs(g(0, 1) - Complex(0.5, 0.25)) < 1e-15);
  CHECK(std::abs(g(1, 0) - std::conj(g(0, 1))) < 1e-15);
}

TEST_CASE("finite-set contains_constant is decided by projection") {
  Eigen::MatrixXcd v(3, 2);
  v << 1.0, 0.0, 1.0, 1.0, 1.0, 2.0;
  CHECK(make_finite_space(v).contains_constant());
  Eigen::MatrixXcd w(3, 2);
  w << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  CHECK_FALSE(make_finite_space(w).contains_constant());
}

TEST_CASE("domains carry probability measures") {
  CHECK(Domain::torus(3).total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Domain::finite_set(7).total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  const Quadrature q = lp_rule(trig1({-1, 0, 1}), 3.0);
  double mass = 0.0;
  for (double w : q.weights) mass += w;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(code_of([] { Domain::finite_set(0); }) == ErrorCode::invalid_sample);
}

TEST_CASE("restriction to equispaced points is orthonormal") {
  const Subspace s = trig1({-1, 0, 1});
  const PointSet eq = generate_equispaced(s.domain(), 3);
  const Subspace r = restrict_space(s, eq);
  CHECK(r.label() == "restricted");
  CHECK(r.domain().size() == 3);
  CHECK((gram_matrix(r) - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("restriction edge cases") {
  const Subspace s = trig1({-1, 0, 1});
  const Subspace r = restrict_space(s, std::vector<Point>{{0.3}});
  CHECK(r.size() == 3);
  CHECK(r.domain().size() == 1);
  CHECK(code_of([&] { restrict_space(s, std::vector<Point>{}); }) == ErrorCode::invalid_sample);
}

TEST_CASE("restriction preserves evaluation exactly") {
  const Subspace s = make_trig_space(2, cube_spectrum(2, 1));
  const PointSet pts = generate_iid(s.domain(), 12, 3);
  const Subspace r = restrict_space(s, pts);
  const Eigen::MatrixXcd direct = s.basis_matrix(pts.points);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Eigen::VectorXcd u = r.basis_values({static_cast<double>(j)});
    CHECK(u == direct.row(static_cast<Eigen::Index>(j)).transpose());
  }
}

TEST_CASE("evaluate is linear") {
  const Subspace s = trig1({-3, -1, 0, 2, 5});
  const CoefficientVector f(s, testing_helpers::random_coefficients(5, 1));
  const CoefficientVector g(s, testing_helpers::random_coefficients(5, 2));
  const Complex alpha(0.7, -1.3), beta(-2.1, 0.4);
  const CoefficientVector h = alpha * f + beta * g;
  Rng rng(9);
  for (int j = 0; j < 20; ++j) {
    const Point x{kTwoPi * rng.uniform()};
    CHECK(std::abs(h(x) - (alpha * f(x) + beta * g(x))) < 1e-12);
  }
}

TEST_CASE("tensor evaluation factorizes") {
  const Subspace a = trig1({-1, 0, 1});
  const Subspace b = trig1({0, 2});
  const Subspace t = tensor_product({a, b});
  const Eigen::VectorXcd ca = testing_helpers::random_coefficients(3, 4);
  const Eigen::VectorXcd cb = testing_helpers::random_coefficients(2, 5);
  Eigen::VectorXcd c(6);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) c[i * 2 + j] = ca[i] * cb[j];
  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    const double x = kTwoPi * rng.uniform(), y = kTwoPi * rng.uniform();
    const Complex lhs = CoefficientVector(t, c)({x, y});
    const Complex rhs = CoefficientVector(a, ca)({x}) * CoefficientVector(b, cb)({y});
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("coefficient length must match the dimension") {
  CHECK(code_of([] { CoefficientVector(trig1({0, 1}), {1.0}); }) == ErrorCode::invalid_size);
}
