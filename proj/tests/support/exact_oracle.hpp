#pragma once

// Test-only reference computations in exact rational arithmetic. Nothing
// here calls into the library.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Float = boost::multiprecision::cpp_bin_float_100;

// Doubles convert to rationals exactly.
inline Rational exact(double v) { return Rational(v); }

// Pearson r from exact sums: r^2 = Sxy^2 / (Sxx Syy) is computed exactly and
// only the final square root is taken in 100-digit floating point.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  Rational sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += exact(x[i]);
    sy += exact(y[i]);
  }
  const Rational mx = sx / n;
  const Rational my = sy / n;
  Rational sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational dx = exact(x[i]) - mx;
    const Rational dy = exact(y[i]) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const Rational r2 = sxy * sxy / (sxx * syy);
  const Float r = boost::multiprecision::sqrt(Float(r2));
  return static_cast<double>(sxy < 0 ? Float(-r) : r);
}

// Min-max normalization evaluated exactly.
inline std::vector<double> min_max(std::span<const double> v) {
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> out;
  for (double x : v)
    out.push_back(lo == hi ? 0.0 : static_cast<double>((exact(x) - exact(lo)) / (exact(hi) - exact(lo))));
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -100.0,
                                         double hi = 100.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

}  // namespace oracle
