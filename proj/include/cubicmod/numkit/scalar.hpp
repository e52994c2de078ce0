#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace cubicmod {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

template <class S>
using Vec = std::vector<S>;

/// Thrown when an input violates a geometric precondition (base point hit,
/// degenerate conic, vertex of a cone, ...). `hint()` names the route the
/// caller is expected to take instead, when one exists.
class DegenerateInput : public std::domain_error {
 public:
  explicit DegenerateInput(const std::string& what, std::string hint = {})
      : std::domain_error(what), hint_(std::move(hint)) {}
  const std::string& hint() const noexcept { return hint_; }

 private:
  std::string hint_;
};

/// Parses "num/den" or "num" (optional sign, whitespace trimmed).
inline Rational parse_rational(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw std::invalid_argument("empty rational");
  std::string s(text.substr(first, last - first + 1));
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
  if (s.find('/') != std::string::npos && sgn(q.get_den()) == 0)
    throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x, double = 0.0) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& x, double tol = 0.0) { return std::abs(x) <= tol; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex to_complex(const Complex& x) { return x; }
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

/// Conversion between scalar regimes. Exact -> float is allowed; the reverse
/// is not offered.
template <class To, class From>
inline To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<To, Complex>) {
    return ScalarTraits<From>::to_complex(x);
  } else {
    static_assert(sizeof(To) == 0, "unsupported scalar conversion");
  }
}

template <class To, class From>
inline Vec<To> vec_cast(const Vec<From>& v) {
  Vec<To> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(scalar_cast<To>(x));
  return out;
}

template <class S>
inline double magnitude(const S& x) {
  return ScalarTraits<S>::magnitude(x);
}

template <class S>
inline double sup_norm(const Vec<S>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, magnitude(x));
  return m;
}

template <class S>
inline bool all_zero(const Vec<S>& v) {
  for (const auto& x : v)
    if (!ScalarTraits<S>::is_zero(x)) return false;
  return true;
}

template <class S>
inline S dot(const Vec<S>& a, const Vec<S>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  S acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class S>
inline Vec<S> axpy(const std::type_identity_t<S>& alpha, const Vec<S>& x, const std::type_identity_t<S>& beta, const Vec<S>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  Vec<S> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
  return out;
}

/// Scales an exact vector to coprime integers with first nonzero entry positive.
inline Vec<Rational> primitive(const Vec<Rational>& v) {
  Integer l = 1;
  for (const auto& x : v)
    if (sgn(x) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Vec<Integer> ints;
  ints.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    ints.push_back(n);
  }
  if (sgn(g) == 0) throw std::invalid_argument("primitive: zero vector");
  int sign = 0;
  for (const auto& n : ints)
    if (sgn(n) != 0) {
      sign = sgn(n);
      break;
    }
  Vec<Rational> out;
  out.reserve(v.size());
  for (auto& n : ints) {
    Integer q = n / g;
    if (sign < 0) q = -q;
    out.emplace_back(q);
  }
  return out;
}

/// Scales a float vector so the entry of largest modulus (first on ties within
/// 1e-12 relative) equals one.
inline Vec<Complex> sup_normalized(const Vec<Complex>& v) {
  double m = sup_norm(v);
  if (m == 0.0) throw std::invalid_argument("sup_normalized: zero vector");
  std::size_t k = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= m * (1.0 - 1e-12)) {
      k = i;
      break;
    }
  Vec<Complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / v[k];
  return out;
}

inline bool is_finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace cubicmod
