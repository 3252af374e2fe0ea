#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "spectracalc/error.hpp"
#include "spectracalc/scalar.hpp"

namespace spectracalc {

/// Dense row-major matrix over one scalar mode (Complex or GaussQ).
template <class T>
class Matrix {
 public:
  using value_type = T;
  using Traits = ScalarTraits<T>;

  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Traits::zero()) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw SpectralError(ErrorKind::dimension_mismatch, "entry count does not match rows x cols");
    }
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw SpectralError(ErrorKind::dimension_mismatch, "ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Traits::one();
    return m;
  }

  static Matrix diagonal(std::span<const T> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> entries() const noexcept { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const T> values) {
    if (values.size() != rows_) throw SpectralError(ErrorKind::dimension_mismatch, "column length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  static Matrix from_columns(std::size_t rows, const std::vector<std::vector<T>>& columns) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  /// this += s * o
  Matrix& add_scaled(const T& s, const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw SpectralError(ErrorKind::dimension_mismatch, "product needs a.cols == b.rows");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if constexpr (Traits::exact) {
          if (aik.is_zero()) continue;
        }
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Nonnegative integer power of a square matrix; pow(0) = I.
  Matrix pow(unsigned k) const {
    if (!is_square()) throw SpectralError(ErrorKind::dimension_mismatch, "power of non-square matrix");
    Matrix result = identity(rows_);
    Matrix base = *this;
    while (k > 0) {
      if (k & 1U) result = result * base;
      k >>= 1U;
      if (k > 0) base = base * base;
    }
    return result;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(data_.size());
    for (const auto& v : data_) out.push_back(f(v));
    return Matrix<U>(rows_, cols_, std::move(out));
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw SpectralError(ErrorKind::dimension_mismatch, "matrix shapes differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatrixF = Matrix<Complex>;
using MatrixQ = Matrix<GaussQ>;

/// Entrywise max magnitude (the max-norm); 0 for an empty matrix.
template <class T>
double max_abs(const Matrix<T>& m) {
  double best = 0.0;
  for (const auto& v : m.entries()) best = std::max(best, ScalarTraits<T>::magnitude(v));
  return best;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  return max_abs(a - b);
}

/// Induced infinity norm (max row sum).
template <class T>
double norm_inf(const Matrix<T>& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) row += ScalarTraits<T>::magnitude(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

template <class T>
T trace(const Matrix<T>& m) {
  if (!m.is_square()) throw SpectralError(ErrorKind::dimension_mismatch, "trace of non-square matrix");
  T t = ScalarTraits<T>::zero();
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

inline MatrixF to_float(const MatrixQ& m) {
  return m.map([](const GaussQ& z) { return z.to_complex(); });
}
inline const MatrixF& to_float(const MatrixF& m) { return m; }

/// Exact image of the binary floating values.
inline MatrixQ to_exact(const MatrixF& m) {
  return m.map([](const Complex& z) { return GaussQ(GaussQ::from_double(z.real()), GaussQ::from_double(z.imag())); });
}

}  // namespace spectracalc
