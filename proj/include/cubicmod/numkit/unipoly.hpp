#pragma once

#include <stdexcept>
#include <vector>

#include "cubicmod/numkit/scalar.hpp"

namespace cubicmod {

/// Dense univariate polynomial, coefficients from constant term upward.
/// Trailing exact zeros are trimmed, so the leading coefficient is nonzero
/// unless the polynomial is identically zero.
template <class S>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(Vec<S> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Vec<S>& coeffs() const { return c_; }
  S operator[](std::size_t i) const { return i < c_.size() ? c_[i] : S(0); }
  const S& leading() const {
    if (c_.empty()) throw std::domain_error("UniPoly: zero polynomial has no leading coefficient");
    return c_.back();
  }

  template <class T = S>
  T operator()(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + scalar_cast<T>(*it);
    return acc;
  }

  UniPoly derivative() const {
    Vec<S> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * S(static_cast<long>(i)));
    return UniPoly(std::move(d));
  }

  template <class T>
  UniPoly<T> cast() const {
    return UniPoly<T>(vec_cast<T>(c_));
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == S(0)) c_.pop_back();
  }
  Vec<S> c_;
};

/// Binary form sum_j c_j u^j v^(d-j) of declared degree d. Unlike UniPoly it
/// keeps vanishing top coefficients, which encode roots at u:v = 1:0.
template <class S>
class BinaryForm {
 public:
  BinaryForm() = default;
  BinaryForm(int degree, Vec<S> coeffs) : degree_(degree), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != degree + 1) throw std::invalid_argument("BinaryForm: need degree+1 coefficients");
  }

  int degree() const { return degree_; }
  const Vec<S>& coeffs() const { return c_; }
  bool is_zero() const { return all_zero(c_); }

  /// Dehomogenization in t = u / v.
  UniPoly<S> dehomogenized() const { return UniPoly<S>(c_); }

  template <class T = S>
  T operator()(const T& u, const T& v) const {
    T acc(0);
    for (int j = 0; j <= degree_; ++j) {
      T term = scalar_cast<T>(c_[static_cast<std::size_t>(j)]);
      for (int k = 0; k < j; ++k) term *= u;
      for (int k = 0; k < degree_ - j; ++k) term *= v;
      acc += term;
    }
    return acc;
  }

  template <class T>
  BinaryForm<T> cast() const {
    return BinaryForm<T>(degree_, vec_cast<T>(c_));
  }

 private:
  int degree_ = 0;
  Vec<S> c_;
};

}  // namespace cubicmod
