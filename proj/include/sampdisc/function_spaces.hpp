#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sampdisc/common.hpp"

namespace sampdisc {

using Frequency = std::vector<int>;

enum class DomainKind { torus, finite_set };

/// A domain with its probability measure: the torus [0, 2pi)^d with normalized
/// Lebesgue measure, or S points with uniform mass 1/S.
class Domain {
 public:
  static Domain torus(int dimension);
  /// `labels` optionally records where the abstract points came from.
  static Domain finite_set(std::size_t size, std::vector<Point> labels = {});

  DomainKind kind() const { return kind_; }
  bool is_torus() const { return kind_ == DomainKind::torus; }
  /// Torus dimension d; 1 for finite sets (points are indices).
  int dimension() const { return dimension_; }
  /// Number of points of a finite set; 0 for the torus.
  std::size_t size() const { return size_; }
  const std::vector<Point>& labels() const { return labels_; }

  /// Throws invalid-point when x does not belong to the domain.
  void check_point(const Point& x) const;
  /// Index of a finite-set point.
  std::size_t index_of(const Point& x) const;

  /// Integral of the constant 1; always 1 up to rounding.
  double total_mass() const;

 private:
  DomainKind kind_ = DomainKind::torus;
  int dimension_ = 1;
  std::size_t size_ = 0;
  std::vector<Point> labels_;
};

struct Spectrum {
  std::vector<Frequency> frequencies;
  /// Set for lacunary spectra built by make_lacunary_space.
  std::optional<double> lacunary_ratio;

  std::size_t size() const { return frequencies.size(); }
  int dimension() const { return frequencies.empty() ? 0 : static_cast<int>(frequencies[0].size()); }
  /// max |k_i| over all frequencies, per coordinate.
  std::vector<int> max_abs_degree() const;
  /// Throws invalid-spectrum on duplicates, ragged dimensions or a broken lacunary ratio.
  void validate() const;
};

/// All frequencies k with |k_i| <= n in each of d coordinates, lexicographic.
Spectrum cube_spectrum(int dimension, int degree);

namespace detail {
struct SubspaceData;
}

/// An N-dimensional subspace X_N of functions on a domain. Immutable; copies
/// share state.
class Subspace {
 public:
  const Domain& domain() const;
  /// Dimension N.
  std::size_t size() const;
  bool contains_constant() const;
  bool is_torus() const { return domain().is_torus(); }
  /// Exponential spectrum; empty for finite-set subspaces.
  const Spectrum& spectrum() const;
  /// Factors of a tensor product; empty otherwise.
  const std::vector<Subspace>& factors() const;
  /// "trig", "lacunary", "tensor", "finite-set" or "restricted".
  const std::string& label() const;

  /// L2(mu) Gram matrix, G_ab = <u_a, u_b>.
  const Eigen::MatrixXcd& gram() const;

  /// Values (u_1(x), ..., u_N(x)).
  Eigen::VectorXcd basis_values(const Point& x) const;
  /// Row j holds basis_values(points[j]).
  Eigen::MatrixXcd basis_matrix(std::span<const Point> points) const;

  /// Lower-triangular L with G = L L^*. Throws degenerate-space when the
  /// Gram matrix is numerically singular.
  const Eigen::MatrixXcd& gram_factor() const;
  /// Rows hold orthonormalized basis values psi(x) = L^{-1} u(x).
  Eigen::MatrixXcd orthonormal_matrix(std::span<const Point> points) const;
  /// Coefficients of the constant function 1, when it lies in the span.
  std::optional<Eigen::VectorXcd> constant_coefficients() const;

  /// Finite-set subspaces: S x N matrix of basis values.
  const Eigen::MatrixXcd& values() const;

 private:
  friend Subspace make_trig_space(int, Spectrum);
  friend Subspace make_lacunary_space(int, double);
  friend Subspace tensor_product(std::span<const Subspace>);
  friend Subspace make_finite_space(Eigen::MatrixXcd, std::vector<Point>);
  friend Subspace restrict_space(const Subspace&, std::span<const Point>);

  explicit Subspace(std::shared_ptr<const detail::SubspaceData> data) : data_(std::move(data)) {}

  std::shared_ptr<const detail::SubspaceData> data_;
};

/// f = sum_i c_i u_i.
struct CoefficientVector {
  Subspace space;
  Eigen::VectorXcd coefficients;

  CoefficientVector(Subspace s, Eigen::VectorXcd c);
  CoefficientVector(Subspace s, std::initializer_list<Complex> c);

  Complex operator()(const Point& x) const;
};

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b);
CoefficientVector operator*(Complex alpha, const CoefficientVector& a);

/// Span of e^{i<k,x>} over the spectrum on the d-torus.
Subspace make_trig_space(int dimension, Spectrum spectrum);
/// T(Lambda_n) with k_1 = 1 and k_{j+1} = ceil(b k_j).
Subspace make_lacunary_space(int n, double ratio);
/// Span of products f_1(x^1) ... f_s(x^s); basis ordered lexicographically
/// with the first factor varying slowest.
Subspace tensor_product(std::span<const Subspace> factors);
Subspace tensor_product(std::initializer_list<Subspace> factors);
/// Subspace of functions on S abstract points; `values` is S x N.
Subspace make_finite_space(Eigen::MatrixXcd values, std::vector<Point> labels = {});
/// X_N(Omega_S): the basis evaluated at the sample, on a uniform finite set.
/// Returns a rank-deficient subspace (with a warning on stderr) when the
/// sample has fewer points than N.
Subspace restrict_space(const Subspace& space, std::span<const Point> sample);

std::vector<Complex> evaluate(const CoefficientVector& f, std::span<const Point> points);
const Eigen::MatrixXcd& gram_matrix(const Subspace& space);

/// Cartesian product of point lists, first list varying slowest.
std::vector<Point> cartesian_product(std::span<const std::vector<Point>> factors);

}  // namespace sampdisc
