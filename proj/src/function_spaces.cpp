#include "sampdisc/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

namespace sampdisc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_spectrum: return "invalid-spectrum";
    case ErrorCode::invalid_ratio: return "invalid-ratio";
    case ErrorCode::unsupported_domain: return "unsupported-domain";
    case ErrorCode::invalid_point: return "invalid-point";
    case ErrorCode::invalid_sample: return "invalid-sample";
    case ErrorCode::invalid_exponent: return "invalid-exponent";
    case ErrorCode::invalid_weight: return "invalid-weight";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::invalid_target: return "invalid-target";
    case ErrorCode::degenerate_space: return "degenerate-space";
    case ErrorCode::missing_seed: return "missing-seed";
    case ErrorCode::invalid_size: return "invalid-size";
    case ErrorCode::oracle_too_large: return "oracle-too-large";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::search_failed: return "search-failed";
    case ErrorCode::lemma_hypothesis_violated: return "lemma-hypothesis-violated";
    case ErrorCode::refused_heuristic: return "refused-heuristic";
    case ErrorCode::unbounded: return "unbounded";
    case ErrorCode::config_error: return "config-error";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Domain

Domain Domain::torus(int dimension) {
  check(dimension >= 1, ErrorCode::unsupported_domain, "torus dimension must be positive");
  Domain d;
  d.kind_ = DomainKind::torus;
  d.dimension_ = dimension;
  return d;
}

Domain Domain::finite_set(std::size_t size, std::vector<Point> labels) {
  check(size >= 1, ErrorCode::invalid_sample, "finite-set domain needs at least one point");
  check(labels.empty() || labels.size() == size, ErrorCode::invalid_sample,
        "finite-set labels must match the number of points");
  Domain d;
  d.kind_ = DomainKind::finite_set;
  d.dimension_ = 1;
  d.size_ = size;
  d.labels_ = std::move(labels);
  return d;
}

void Domain::check_point(const Point& x) const {
  if (is_torus()) {
    check(static_cast<int>(x.size()) == dimension_, ErrorCode::invalid_point,
          "point has " + std::to_string(x.size()) + " coordinates, torus dimension is " +
              std::to_string(dimension_));
    for (double v : x) check(std::isfinite(v), ErrorCode::invalid_point, "non-finite coordinate");
    return;
  }
  check(x.size() == 1, ErrorCode::invalid_point, "finite-set points are single indices");
  const double j = x[0];
  check(j >= 0 && j < static_cast<double>(size_) && j == std::floor(j), ErrorCode::invalid_point,
        "index " + std::to_string(j) + " outside finite set of size " + std::to_string(size_));
}

std::size_t Domain::index_of(const Point& x) const {
  check_point(x);
  return static_cast<std::size_t>(x[0]);
}

double Domain::total_mass() const {
  if (is_torus()) return 1.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < size_; ++j) mass += 1.0 / static_cast<double>(size_);
  return mass;
}

// ---------------------------------------------------------------- Spectrum

std::vector<int> Spectrum::max_abs_degree() const {
  std::vector<int> deg(static_cast<std::size_t>(dimension()), 0);
  for (const auto& k : frequencies)
    for (std::size_t i = 0; i < k.size(); ++i) deg[i] = std::max(deg[i], std::abs(k[i]));
  return deg;
}

void Spectrum::validate() const {
  check(!frequencies.empty(), ErrorCode::invalid_spectrum, "spectrum is empty");
  const std::size_t d = frequencies.front().size();
  check(d >= 1, ErrorCode::invalid_spectrum, "frequencies must have at least one coordinate");
  std::set<Frequency> seen;
  for (const auto& k : frequencies) {
    check(k.size() == d, ErrorCode::invalid_spectrum, "frequencies have mixed dimensions");
    check(seen.insert(k).second, ErrorCode::invalid_spectrum, "duplicate frequency");
  }
  if (lacunary_ratio) {
    const double b = *lacunary_ratio;
    check(d == 1 && frequencies.front()[0] == 1, ErrorCode::invalid_spectrum,
          "lacunary spectra are one-dimensional and start at 1");
    for (std::size_t j = 0; j + 1 < frequencies.size(); ++j)
      check(frequencies[j + 1][0] >= b * frequencies[j][0], ErrorCode::invalid_spectrum,
            "lacunary ratio violated");
  }
}

Spectrum cube_spectrum(int dimension, int degree) {
  check(dimension >= 1 && degree >= 0, ErrorCode::invalid_spectrum, "bad cube spectrum");
  Spectrum s;
  Frequency k(static_cast<std::size_t>(dimension), -degree);
  while (true) {
    s.frequencies.push_back(k);
    int i = dimension - 1;
    while (i >= 0 && k[i] == degree) k[i--] = -degree;
    if (i < 0) break;
    ++k[i];
  }
  return s;
}

// ---------------------------------------------------------------- Subspace

namespace detail {

struct SubspaceData {
  Domain domain;
  std::string label;
  Spectrum spectrum;
  Eigen::MatrixXcd values;  // finite sets only
  std::vector<Subspace> factors;
  std::size_t size = 0;
  bool contains_constant = false;
  Eigen::MatrixXcd gram;
  std::optional<Eigen::MatrixXcd> gram_factor;
  std::optional<Eigen::VectorXcd> constant;
};

}  // namespace detail

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kConstantTolerance = 1e-10;

std::optional<Eigen::MatrixXcd> cholesky_if_nonsingular(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  if (!(top > 0) || eig.eigenvalues().minCoeff() <= kRankTolerance * top) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return Eigen::MatrixXcd(llt.matrixL());
}

void finish(detail::SubspaceData& d) {
  if (d.domain.is_torus()) {
    d.size = d.spectrum.size();
    d.gram = Eigen::MatrixXcd::Identity(d.size, d.size);
    d.gram_factor = d.gram;
    const Frequency zero(static_cast<std::size_t>(d.domain.dimension()), 0);
    for (std::size_t i = 0; i < d.size; ++i) {
      if (d.spectrum.frequencies[i] == zero) {
        d.contains_constant = true;
        d.constant = Eigen::VectorXcd::Unit(d.size, i);
      }
    }
    return;
  }
  const auto S = static_cast<double>(d.values.rows());
  d.size = static_cast<std::size_t>(d.values.cols());
  // G_ab = (1/S) sum_j u_a(x_j) conj(u_b(x_j))
  d.gram = (d.values.transpose() * d.values.conjugate()) / S;
  d.gram_factor = cholesky_if_nonsingular(d.gram);

  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(d.values.rows());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(d.values);
  const Eigen::VectorXcd c = cod.solve(ones);
  const double residual = (d.values * c - ones).norm() / std::sqrt(S);
  if (residual <= kConstantTolerance) {
    d.contains_constant = true;
    d.constant = c;
  }
}

}  // namespace

const Domain& Subspace::domain() const { return data_->domain; }
std::size_t Subspace::size() const { return data_->size; }
bool Subspace::contains_constant() const { return data_->contains_constant; }
const Spectrum& Subspace::spectrum() const { return data_->spectrum; }
const std::vector<Subspace>& Subspace::factors() const { return data_->factors; }
const std::string& Subspace::label() const { return data_->label; }
const Eigen::MatrixXcd& Subspace::gram() const { return data_->gram; }
const Eigen::MatrixXcd& Subspace::values() const { return data_->values; }
std::optional<Eigen::VectorXcd> Subspace::constant_coefficients() const { return data_->constant; }

const Eigen::MatrixXcd& Subspace::gram_factor() const {
  check(data_->gram_factor.has_value(), ErrorCode::degenerate_space,
        "Gram matrix is rank-deficient; the basis cannot be orthonormalized");
  return *data_->gram_factor;
}

Eigen::VectorXcd Subspace::basis_values(const Point& x) const {
  const auto& d = *data_;
  d.domain.check_point(x);
  if (!d.domain.is_torus()) return d.values.row(static_cast<Eigen::Index>(x[0])).transpose();
  Eigen::VectorXcd out(d.size);
  for (std::size_t i = 0; i < d.size; ++i) {
    const auto& k = d.spectrum.frequencies[i];
    double phase = 0.0;
    for (std::size_t c = 0; c < k.size(); ++c) phase += k[c] * x[c];
    out[i] = std::polar(1.0, phase);
  }
  return out;
}

Eigen::MatrixXcd Subspace::basis_matrix(std::span<const Point> points) const {
  Eigen::MatrixXcd out(points.size(), size());
  for (std::size_t j = 0; j < points.size(); ++j) out.row(j) = basis_values(points[j]).transpose();
  return out;
}

Eigen::MatrixXcd Subspace::orthonormal_matrix(std::span<const Point> points) const {
  Eigen::MatrixXcd phi = basis_matrix(points);
  if (is_torus()) return phi;
  // psi(x)^T = u(x)^T L^{-T}, i.e. rows of phi times L^{-T}.
  const Eigen::MatrixXcd& L = gram_factor();
  Eigen::MatrixXcd psi_t = L.triangularView<Eigen::Lower>().solve(phi.transpose());
  return psi_t.transpose();
}

Subspace make_trig_space(int dimension, Spectrum spectrum) {
  check(dimension >= 1, ErrorCode::unsupported_domain, "torus dimension must be positive");
  spectrum.validate();
  check(spectrum.dimension() == dimension, ErrorCode::invalid_spectrum,
        "frequency dimension does not match torus dimension");
  auto d = std::make_shared<detail::SubspaceData>();
  d->domain = Domain::torus(dimension);
  d->label = spectrum.lacunary_ratio ? "lacunary" : "trig";
  d->spectrum = std::move(spectrum);
  finish(*d);
  return Subspace(std::move(d));
}

Subspace make_lacunary_space(int n, double ratio) {
  check(n >= 1, ErrorCode::invalid_spectrum, "lacunary space needs n >= 1");
  check(ratio > 1.0, ErrorCode::invalid_ratio, "lacunary ratio must exceed 1");
  Spectrum s;
  s.lacunary_ratio = ratio;
  long k = 1;
  for (int j = 0; j < n; ++j) {
    s.frequencies.push_back({static_cast<int>(k)});
    const long next = static_cast<long>(std::ceil(ratio * static_cast<double>(k)));
    k = std::max(next, k + 1);
  }
  return make_trig_space(1, std::move(s));
}

Subspace tensor_product(std::span<const Subspace> factors) {
  check(factors.size() >= 2, ErrorCode::unsupported_domain, "tensor product needs at least two factors");
  for (const auto& f : factors)
    check(f.is_torus(), ErrorCode::unsupported_domain, "tensor products are defined for torus factors only");

  Spectrum product;
  product.frequencies.push_back({});
  int dimension = 0;
  for (const auto& f : factors) {
    dimension += f.domain().dimension();
    std::vector<Frequency> next;
    next.reserve(product.frequencies.size() * f.size());
    for (const auto& head : product.frequencies) {
      for (const auto& k : f.spectrum().frequencies) {
        Frequency joined = head;
        joined.insert(joined.end(), k.begin(), k.end());
        next.push_back(std::move(joined));
      }
    }
    product.frequencies = std::move(next);
  }
  auto d = std::make_shared<detail::SubspaceData>();
  d->domain = Domain::torus(dimension);
  d->label = "tensor";
  d->spectrum = std::move(product);
  d->factors.assign(factors.begin(), factors.end());
  finish(*d);
  return Subspace(std::move(d));
}

Subspace tensor_product(std::initializer_list<Subspace> factors) {
  return tensor_product(std::span<const Subspace>(factors.begin(), factors.size()));
}

Subspace make_finite_space(Eigen::MatrixXcd values, std::vector<Point> labels) {
  check(values.rows() >= 1, ErrorCode::invalid_sample, "finite-set domain needs at least one point");
  check(values.cols() >= 1, ErrorCode::invalid_spectrum, "subspace needs at least one basis vector");
  auto d = std::make_shared<detail::SubspaceData>();
  d->domain = Domain::finite_set(static_cast<std::size_t>(values.rows()), std::move(labels));
  d->label = "finite-set";
  d->values = std::move(values);
  finish(*d);
  return Subspace(std::move(d));
}

Subspace restrict_space(const Subspace& space, std::span<const Point> sample) {
  check(!sample.empty(), ErrorCode::invalid_sample, "cannot restrict to an empty sample");
  if (sample.size() < space.size()) {
    std::cerr << "warning: restricting an N=" << space.size() << " subspace to " << sample.size()
              << " points; the restricted Gram matrix is rank-deficient\n";
  }
  auto d = std::make_shared<detail::SubspaceData>();
  d->domain = Domain::finite_set(sample.size(), std::vector<Point>(sample.begin(), sample.end()));
  d->label = "restricted";
  d->values = space.basis_matrix(sample);
  finish(*d);
  return Subspace(std::move(d));
}

// ---------------------------------------------------------------- coefficients

CoefficientVector::CoefficientVector(Subspace s, Eigen::VectorXcd c)
    : space(std::move(s)), coefficients(std::move(c)) {
  check(static_cast<std::size_t>(coefficients.size()) == space.size(), ErrorCode::invalid_size,
        "coefficient count does not match subspace dimension");
}

CoefficientVector::CoefficientVector(Subspace s, std::initializer_list<Complex> c)
    : CoefficientVector(std::move(s), Eigen::Map<const Eigen::VectorXcd>(c.begin(), static_cast<Eigen::Index>(c.size()))) {}

Complex CoefficientVector::operator()(const Point& x) const {
  return space.basis_values(x).transpose() * coefficients;
}

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b) {
  return CoefficientVector(a.space, a.coefficients + b.coefficients);
}

CoefficientVector operator*(Complex alpha, const CoefficientVector& a) {
  return CoefficientVector(a.space, alpha * a.coefficients);
}

std::vector<Complex> evaluate(const CoefficientVector& f, std::span<const Point> points) {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(f(x));
  return out;
}

const Eigen::MatrixXcd& gram_matrix(const Subspace& space) { return space.gram(); }

std::vector<Point> cartesian_product(std::span<const std::vector<Point>> factors) {
  std::vector<Point> out{Point{}};
  for (const auto& f : factors) {
    std::vector<Point> next;
    next.reserve(out.size() * f.size());
    for (const auto& head : out) {
      for (const auto& x : f) {
        Point joined = head;
        joined.insert(joined.end(), x.begin(), x.end());
        next.push_back(std::move(joined));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace sampdisc
