#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sampdisc {

using Complex = std::complex<double>;

/// A point of a domain. Torus points hold d angles in [0, 2pi); finite-set
/// points hold a single entry, the 0-based index of the domain point.
using Point = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  invalid_spectrum,
  invalid_ratio,
  unsupported_domain,
  invalid_point,
  invalid_sample,
  invalid_exponent,
  invalid_weight,
  unsupported,
  invalid_target,
  degenerate_space,
  missing_seed,
  invalid_size,
  oracle_too_large,
  budget_exhausted,
  search_failed,
  lemma_hypothesis_violated,
  refused_heuristic,
  unbounded,
  config_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void check(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

inline bool is_infinite_exponent(double p) { return p == kInfinity; }

inline void check_exponent(double p) {
  check(p >= 1.0, ErrorCode::invalid_exponent, "exponent must be >= 1, got " + std::to_string(p));
}

/// Integer-valued even exponent (2, 4, 6, ...).
inline bool is_even_integer(double p) {
  return p >= 2.0 && p < 1e6 && p == static_cast<double>(static_cast<long>(p)) &&
         static_cast<long>(p) % 2 == 0;
}

}  // namespace sampdisc
