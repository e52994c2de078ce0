#pragma once

#include <cstdint>
#include <random>

#include "cubicmod/numkit/scalar.hpp"

namespace cubicmod {

/// Seedable sampler used for every randomized construction and trial batch.
/// The engine is std::mt19937_64, so a seed reproduces a run exactly on a
/// given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 20240601) : engine_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  /// Nonzero integer in [-bound, bound].
  std::int64_t nonzero_integer(std::int64_t bound) {
    std::int64_t v = 0;
    while (v == 0) v = integer(-bound, bound);
    return v;
  }

  /// Rational with numerator in [-num_bound, num_bound], denominator in [1, den_bound].
  Rational rational(std::int64_t num_bound = 20, std::int64_t den_bound = 7) {
    Rational q(Integer(static_cast<long>(integer(-num_bound, num_bound))), Integer(static_cast<long>(integer(1, den_bound))));
    q.canonicalize();
    return q;
  }

  double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  Complex complex_unit() { return {real(), real()}; }

  Vec<Rational> rational_vector(std::size_t n, std::int64_t num_bound = 20, std::int64_t den_bound = 7) {
    Vec<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rational(num_bound, den_bound));
    return v;
  }

  Vec<double> real_vector(std::size_t n) {
    Vec<double> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(real());
    return v;
  }

  Vec<Complex> complex_vector(std::size_t n) {
    Vec<Complex> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(complex_unit());
    return v;
  }

  std::uint64_t next_seed() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cubicmod
