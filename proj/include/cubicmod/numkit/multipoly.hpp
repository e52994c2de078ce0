#pragma once

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicmod/numkit/matrix.hpp"
#include "cubicmod/numkit/scalar.hpp"

namespace cubicmod {

using Exponent = std::vector<int>;

/// All exponent vectors of n variables summing to d, in lexicographically
/// decreasing order (x0^d first).
inline std::vector<Exponent> monomials(int nvars, int degree) {
  std::vector<Exponent> out;
  Exponent e(static_cast<std::size_t>(nvars), 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nvars - 1) {
      e[static_cast<std::size_t>(var)] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = k;
      self(self, var + 1, left - k);
    }
  };
  if (nvars == 0) {
    if (degree == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, degree);
  return out;
}

/// Homogeneous polynomial of fixed degree in `nvars` variables with sparse
/// storage. Zero coefficients are never stored.
template <class S>
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(int nvars, int degree) : nvars_(nvars), degree_(degree) {
    if (nvars < 0 || degree < 0) throw std::invalid_argument("MultiPoly: negative size");
  }

  static MultiPoly variable(int nvars, int i) {
    MultiPoly p(nvars, 1);
    Exponent e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, S(1));
    return p;
  }

  static MultiPoly linear_form(const Vec<S>& coeffs) {
    MultiPoly p(static_cast<int>(coeffs.size()), 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Exponent e(coeffs.size(), 0);
      e[i] = 1;
      p.add_term(e, coeffs[i]);
    }
    return p;
  }

  static MultiPoly constant(int nvars, const S& c) {
    MultiPoly p(nvars, 0);
    p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
    return p;
  }

  /// Builds a polynomial from coefficients listed in `monomials(nvars, degree)` order.
  static MultiPoly from_coefficients(int nvars, int degree, const Vec<S>& coeffs) {
    auto mons = monomials(nvars, degree);
    if (coeffs.size() != mons.size()) throw std::invalid_argument("from_coefficients: wrong count");
    MultiPoly p(nvars, degree);
    for (std::size_t i = 0; i < mons.size(); ++i) p.add_term(mons[i], coeffs[i]);
    return p;
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const std::map<Exponent, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const S& c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("add_term: wrong variable count");
    if (std::accumulate(e.begin(), e.end(), 0) != degree_)
      throw std::invalid_argument("add_term: term degree differs from declared degree");
    if (c == S(0)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == S(0)) terms_.erase(it);
    }
  }

  S coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? S(0) : it->second;
  }

  Vec<S> coefficients() const {
    Vec<S> out;
    for (const auto& m : monomials(nvars_, degree_)) out.push_back(coeff(m));
    return out;
  }

  template <class T = S>
  T operator()(const Vec<T>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("MultiPoly eval: wrong point size");
    T acc(0);
    for (const auto& [e, c] : terms_) {
      T term = scalar_cast<T>(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }

  MultiPoly partial(int var) const {
    MultiPoly out(nvars_, degree_ > 0 ? degree_ - 1 : 0);
    if (degree_ == 0) return out;
    for (const auto& [e, c] : terms_) {
      int k = e[static_cast<std::size_t>(var)];
      if (k == 0) continue;
      Exponent f = e;
      f[static_cast<std::size_t>(var)] -= 1;
      out.add_term(f, c * S(k));
    }
    return out;
  }

  std::vector<MultiPoly> gradient() const {
    std::vector<MultiPoly> g;
    for (int i = 0; i < nvars_; ++i) g.push_back(partial(i));
    return g;
  }

  template <class T = S>
  Vec<T> gradient_at(const Vec<T>& x) const {
    Vec<T> g;
    for (int i = 0; i < nvars_; ++i) g.push_back(partial(i)(x));
    return g;
  }

  /// Substitution x = M y, with M of size nvars x m. Result has m variables.
  template <class T>
  MultiPoly<T> compose(const Matrix<T>& m) const {
    if (static_cast<int>(m.rows()) != nvars_) throw std::invalid_argument("compose: matrix rows != nvars");
    const int out_vars = static_cast<int>(m.cols());
    std::vector<MultiPoly<T>> lin;
    for (int i = 0; i < nvars_; ++i) lin.push_back(MultiPoly<T>::linear_form(m.row(static_cast<std::size_t>(i))));
    // powers[i][k] = lin[i]^k
    std::vector<std::vector<MultiPoly<T>>> powers(static_cast<std::size_t>(nvars_));
    for (int i = 0; i < nvars_; ++i) {
      powers[static_cast<std::size_t>(i)].push_back(MultiPoly<T>::constant(out_vars, T(1)));
      for (int k = 1; k <= degree_; ++k)
        powers[static_cast<std::size_t>(i)].push_back(powers[static_cast<std::size_t>(i)].back() * lin[static_cast<std::size_t>(i)]);
    }
    MultiPoly<T> out(out_vars, degree_);
    for (const auto& [e, c] : terms_) {
      MultiPoly<T> term = MultiPoly<T>::constant(out_vars, scalar_cast<T>(c));
      for (int i = 0; i < nvars_; ++i)
        if (e[static_cast<std::size_t>(i)] > 0) term = term * powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(e[static_cast<std::size_t>(i)])];
      out += term;
    }
    return out;
  }

  /// Collects the terms in which variable `var` has exponent `power`, with
  /// that variable removed. Result has nvars-1 variables, degree d-power.
  MultiPoly coefficient_of(int var, int power) const {
    MultiPoly out(nvars_ - 1, degree_ - power);
    for (const auto& [e, c] : terms_) {
      if (e[static_cast<std::size_t>(var)] != power) continue;
      Exponent f;
      for (int i = 0; i < nvars_; ++i)
        if (i != var) f.push_back(e[static_cast<std::size_t>(i)]);
      out.add_term(f, c);
    }
    return out;
  }

  template <class T>
  MultiPoly<T> cast() const {
    MultiPoly<T> out(nvars_, degree_);
    for (const auto& [e, c] : terms_) out.add_term(e, scalar_cast<T>(c));
    return out;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_compatible(o);
    if (is_zero()) degree_ = o.degree_;
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_compatible(o);
    if (is_zero()) degree_ = o.degree_;
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("MultiPoly product: variable count mismatch");
    MultiPoly out(a.nvars_, a.degree_ + b.degree_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  friend MultiPoly operator*(const S& s, const MultiPoly& p) {
    MultiPoly out(p.nvars_, p.degree_);
    for (const auto& [e, c] : p.terms_) out.add_term(e, s * c);
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  /// Largest coefficient magnitude.
  double norm() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
    return m;
  }

  /// Sum of |c| * |x|^e, the natural scale for residual tests at x.
  template <class T>
  double eval_scale(const Vec<T>& x) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = magnitude(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= magnitude(x[i]);
      acc += t;
    }
    return acc;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << "(" << it->second << ")";
      for (std::size_t i = 0; i < it->first.size(); ++i) {
        if (it->first[i] == 0) continue;
        os << "*" << (i < names.size() ? names[i] : "x" + std::to_string(i));
        if (it->first[i] > 1) os << "^" << it->first[i];
      }
    }
    return first ? "0" : os.str();
  }

 private:
  void check_compatible(const MultiPoly& o) const {
    if (o.nvars_ != nvars_ || (o.degree_ != degree_ && !o.is_zero() && !is_zero()))
      throw std::invalid_argument("MultiPoly: incompatible operands");
  }

  int nvars_ = 0;
  int degree_ = 0;
  std::map<Exponent, S> terms_;
};

/// Cubic hypersurface of P^4: a cubic form in five variables, exact coefficients.
struct CubicThreefold {
  MultiPoly<Rational> form;

  explicit CubicThreefold(MultiPoly<Rational> f) : form(std::move(f)) {
    if (form.nvars() != 5 || form.degree() != 3) throw std::invalid_argument("CubicThreefold: need a cubic in 5 variables");
    if (form.is_zero()) throw std::invalid_argument("CubicThreefold: zero form");
  }
};

}  // namespace cubicmod
