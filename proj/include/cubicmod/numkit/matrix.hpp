#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubicmod/numkit/scalar.hpp"

namespace cubicmod {

/// Dense row-major matrix over either scalar regime.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& fill = S(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  static Matrix from_rows(const std::vector<Vec<S>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("from_rows: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vec<S>>& cols) {
    return from_rows(cols).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<S> row(std::size_t i) const {
    return Vec<S>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  Vec<S> col(std::size_t j) const {
    Vec<S> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  std::vector<Vec<S>> columns() const {
    std::vector<Vec<S>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(col(j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vec<S> apply(const Vec<S>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    Vec<S> y(rows_, S(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  /// Row vector times matrix.
  Vec<S> left_apply(const Vec<S>& h) const {
    if (h.size() != rows_) throw std::invalid_argument("Matrix::left_apply: dimension mismatch");
    Vec<S> y(cols_, S(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[j] += h[i] * (*this)(i, j);
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (ScalarTraits<S>::is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  template <class T>
  Matrix<T> cast() const {
    Matrix<T> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = scalar_cast<T>((*this)(i, j));
    return m;
  }

  const std::vector<S>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

// ---------------------------------------------------------------------------
// Exact linear algebra over the rationals.

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix<Rational>& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && sgn(a(p, c)) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix<Rational> a) { return rref(a).size(); }

/// Basis of the right kernel; empty iff the kernel is trivial.
inline std::vector<Vec<Rational>> kernel(Matrix<Rational> a) {
  auto pivots = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<Rational> v(a.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

struct SolutionSpace {
  std::optional<Vec<Rational>> particular;  // unset when inconsistent or homogeneous
  std::vector<Vec<Rational>> kernel;
  bool consistent = true;
};

/// Solves A x = rhs exactly (homogeneous system when rhs is absent).
inline SolutionSpace solve_linear(const Matrix<Rational>& a, const std::optional<Vec<Rational>>& rhs = {}) {
  SolutionSpace out;
  if (!rhs) {
    out.kernel = kernel(a);
    return out;
  }
  if (rhs->size() != a.rows()) throw std::invalid_argument("solve_linear: rhs dimension mismatch");
  Matrix<Rational> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = (*rhs)[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) {
    out.consistent = false;
    out.kernel = kernel(a);
    return out;
  }
  Vec<Rational> x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  out.particular = std::move(x);
  out.kernel = kernel(a);
  return out;
}

inline Rational determinant(Matrix<Rational> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: non-square matrix");
  Rational det = 1;
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a(i, c)) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

inline Matrix<Rational> inverse(const Matrix<Rational>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: non-square matrix");
  const std::size_t n = a.rows();
  Matrix<Rational> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
  Matrix<Rational> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Exact solve of a square nonsingular system.
inline Vec<Rational> solve_square(const Matrix<Rational>& a, const Vec<Rational>& b) {
  auto sol = solve_linear(a, b);
  if (!sol.consistent || !sol.particular || !sol.kernel.empty())
    throw std::domain_error("solve_square: singular system");
  return *sol.particular;
}

// ---------------------------------------------------------------------------
// Float linear algebra (Eigen-backed).

inline Eigen::MatrixXcd to_eigen(const Matrix<Complex>& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  return m;
}

inline Matrix<Complex> from_eigen(const Eigen::MatrixXcd& m) {
  Matrix<Complex> a(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return a;
}

inline Eigen::VectorXcd to_eigen(const Vec<Complex>& v) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

inline Vec<Complex> from_eigen_vec(const Eigen::VectorXcd& e) {
  Vec<Complex> v(static_cast<std::size_t>(e.size()));
  for (Eigen::Index i = 0; i < e.size(); ++i) v[static_cast<std::size_t>(i)] = e(i);
  return v;
}

/// Numerical rank decision by singular-value gap.
struct RankReport {
  int rank = 0;
  /// sigma_rank / sigma_max for the first discarded singular value (0 if none).
  double gap_ratio = 0.0;
  /// Smallest retained ratio sigma_{rank-1} / sigma_max.
  double retained_ratio = 1.0;
  bool ill_conditioned = false;
  std::vector<double> singular_values;
};

inline constexpr double kRankThreshold = 1e-8;

inline RankReport numerical_rank(const Matrix<Complex>& a, double threshold = kRankThreshold) {
  RankReport rep;
  if (a.rows() == 0 || a.cols() == 0) return rep;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) rep.singular_values.push_back(sv(i));
  const double top = rep.singular_values.front();
  if (top == 0.0) return rep;
  for (double s : rep.singular_values) {
    double ratio = s / top;
    if (ratio > threshold) {
      ++rep.rank;
      rep.retained_ratio = ratio;
    } else {
      rep.gap_ratio = ratio;
      break;
    }
  }
  auto near = [&](double r) { return r > threshold / 10.0 && r < threshold * 10.0; };
  rep.ill_conditioned = near(rep.retained_ratio) || (rep.rank < static_cast<int>(rep.singular_values.size()) && near(rep.gap_ratio));
  return rep;
}

inline RankReport exact_rank_report(const Matrix<Rational>& a) {
  RankReport rep;
  rep.rank = static_cast<int>(rank(a));
  return rep;
}

/// Right kernel of a float matrix: singular vectors whose singular value is at
/// most `threshold` times the largest.
inline std::vector<Vec<Complex>> numeric_kernel(const Matrix<Complex>& a, double threshold = kRankThreshold) {
  std::vector<Vec<Complex>> basis;
  if (a.cols() == 0) return basis;
  Eigen::MatrixXcd m = to_eigen(a);
  if (m.rows() < m.cols()) {
    Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(m.cols(), m.cols());
    padded.topRows(m.rows()) = m;
    m = padded;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (top == 0.0 || sv(i) <= threshold * top) basis.push_back(from_eigen_vec(svd.matrixV().col(i)));
  return basis;
}

/// Least-squares solve (exact solve when square and well-posed).
inline Vec<Complex> solve_least_squares(const Matrix<Complex>& a, const Vec<Complex>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_least_squares: dimension mismatch");
  Eigen::VectorXcd x = to_eigen(a).completeOrthogonalDecomposition().solve(to_eigen(b));
  return from_eigen_vec(x);
}

inline Complex determinant(const Matrix<Complex>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: non-square matrix");
  return to_eigen(a).partialPivLu().determinant();
}

inline Matrix<Complex> inverse(const Matrix<Complex>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: non-square matrix");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(to_eigen(a));
  if (!lu.isInvertible()) throw std::domain_error("inverse: singular matrix");
  return from_eigen(lu.inverse());
}

inline Vec<Complex> solve_square(const Matrix<Complex>& a, const Vec<Complex>& b) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(to_eigen(a));
  if (!lu.isInvertible()) throw std::domain_error("solve_square: singular system");
  return from_eigen_vec(lu.solve(to_eigen(b)));
}

// ---------------------------------------------------------------------------
// Regime-generic helpers.

template <class S>
inline RankReport rank_report(const Matrix<S>& a) {
  if constexpr (is_exact_v<S>)
    return exact_rank_report(a);
  else
    return numerical_rank(a);
}

/// Kernel in either regime (numerical kernels use the rank threshold).
template <class S>
inline std::vector<Vec<S>> kernel_basis(const Matrix<S>& a) {
  if constexpr (is_exact_v<S>)
    return kernel(a);
  else
    return numeric_kernel(a);
}

/// Stacks the vectors as columns and reports their rank.
template <class S>
inline int span_rank(const std::vector<Vec<S>>& vectors) {
  if (vectors.empty()) return 0;
  return rank_report(Matrix<S>::from_columns(vectors)).rank;
}

}  // namespace cubicmod
