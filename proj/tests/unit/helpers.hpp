#pragma once

#include <complex>
#include <vector>

#include "doctest.h"
#include "sampdisc/function_spaces.hpp"
#include "sampdisc/random.hpp"

namespace testing_helpers {

using sampdisc::Complex;

inline sampdisc::Subspace trig1(std::initializer_list<int> ks) {
  sampdisc::Spectrum s;
  for (int k : ks) s.frequencies.push_back({k});
  return sampdisc::make_trig_space(1, s);
}

inline Eigen::VectorXcd random_coefficients(std::size_t n, std::uint64_t seed) {
  sampdisc::Rng rng(seed);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(n));
  for (auto& v : c) v = rng.complex_normal();
  return c;
}

// Direct summation of sum_k c_k e^{i<k,x>} in long double.
inline std::complex<long double> direct_sum(const sampdisc::Spectrum& s, const Eigen::VectorXcd& c,
                                            const sampdisc::Point& x) {
  std::complex<long double> total = 0;
  for (std::size_t i = 0; i < s.frequencies.size(); ++i) {
    long double phase = 0;
    for (std::size_t a = 0; a < x.size(); ++a) phase += static_cast<long double>(s.frequencies[i][a]) * x[a];
    const std::complex<long double> ci(c[static_cast<Eigen::Index>(i)].real(), c[static_cast<Eigen::Index>(i)].imag());
    total += ci * std::complex<long double>(std::cos(phase), std::sin(phase));
  }
  return total;
}

template <typename Fn>
sampdisc::ErrorCode code_of(const Fn& fn) {
  try {
    fn();
  } catch (const sampdisc::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return sampdisc::ErrorCode::unsupported;
}

}  // namespace testing_helpers
