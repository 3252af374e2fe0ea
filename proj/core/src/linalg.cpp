#include "spectracalc/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace spectracalc {

namespace {

using EigenMat = Eigen::MatrixXcd;

EigenMat to_eigen(const MatrixF& a) {
  EigenMat m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

template <class T>
void require_square(const Matrix<T>& a, const char* what) {
  if (!a.is_square()) throw SpectralError(ErrorKind::dimension_mismatch, std::string(what) + " needs a square matrix");
}

// Row-echelon reduction in place. Returns pivot columns. Float mode pivots on the
// largest magnitude and treats |x| <= eps as zero; exact mode pivots on the first nonzero.
template <class T>
std::vector<std::size_t> row_reduce(Matrix<T>& m, double eps, bool reduced) {
  using Tr = ScalarTraits<T>;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = m.rows();
    double best_mag = 0.0;
    for (std::size_t i = row; i < m.rows(); ++i) {
      if (Tr::is_zero(m(i, col), eps)) continue;
      if constexpr (Tr::exact) {
        best = i;
        break;
      } else {
        double mag = Tr::magnitude(m(i, col));
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
    }
    if (best == m.rows()) continue;
    if (best != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(row, j));
    T inv = Tr::one() / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = reduced ? 0 : row + 1; i < m.rows(); ++i) {
      if (i == row || Tr::is_zero(m(i, col), 0.0)) continue;
      T factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<double> singular_values(const MatrixF& a) {
  if (a.empty()) return {};
  Eigen::JacobiSVD<EigenMat> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

template <>
std::size_t rank_with_tol(const MatrixF& a, const Tolerance& tol) {
  auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  double threshold = tol.rank_eps * s.front();
  std::size_t r = 0;
  for (double v : s) r += v > threshold ? 1 : 0;
  return r;
}

template <>
std::size_t rank_with_tol(const MatrixQ& a, const Tolerance& /*tol*/) {
  MatrixQ work = a;
  return row_reduce(work, 0.0, false).size();
}

template <>
std::vector<Vector<Complex>> null_space_basis(const MatrixF& a, const Tolerance& tol) {
  std::vector<Vector<Complex>> basis;
  if (a.cols() == 0) return basis;
  if (a.rows() == 0) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Vector<Complex> e(a.cols());
      e[j] = 1.0;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  Eigen::JacobiSVD<EigenMat> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) > tol.rank_eps * s(0) ? 1 : 0;
  }
  const auto& v = svd.matrixV();
  for (std::size_t j = r; j < a.cols(); ++j) {
    Vector<Complex> col(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) col[i] = v(i, j);
    basis.push_back(std::move(col));
  }
  return basis;
}

template <>
std::vector<Vector<GaussQ>> null_space_basis(const MatrixQ& a, const Tolerance& /*tol*/) {
  MatrixQ work = a;
  auto pivots = row_reduce(work, 0.0, true);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector<GaussQ>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector<GaussQ> v(a.cols());
    v[free] = GaussQ(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -work(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a, const Tolerance& tol) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  if (n == 0) throw SpectralError(ErrorKind::invalid_argument, "inverse of a 0x0 matrix");
  if (rank_with_tol(a, tol) < n) throw SpectralError(ErrorKind::singular, "matrix is singular to tolerance");
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = ScalarTraits<T>::one();
  }
  auto pivots = row_reduce(aug, 0.0, true);
  if (pivots.size() < n || pivots[n - 1] != n - 1) {
    throw SpectralError(ErrorKind::singular, "elimination found no pivot");
  }
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <class T>
T determinant(const Matrix<T>& a) {
  using Tr = ScalarTraits<T>;
  require_square(a, "determinant");
  Matrix<T> m = a;
  const std::size_t n = m.rows();
  T det = Tr::one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    double best_mag = -1.0;
    for (std::size_t i = col; i < n; ++i) {
      if (Tr::is_zero(m(i, col), 0.0)) continue;
      double mag = Tr::magnitude(m(i, col));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
      if constexpr (Tr::exact) break;
    }
    if (best == n) return Tr::zero();
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(best, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    T inv = Tr::one() / m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (Tr::is_zero(m(i, col), 0.0)) continue;
      T factor = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
    }
  }
  return det;
}

template <class T>
std::vector<T> characteristic_polynomial(const Matrix<T>& a) {
  using Tr = ScalarTraits<T>;
  require_square(a, "characteristic polynomial");
  const std::size_t n = a.rows();
  std::vector<T> c(n + 1, Tr::zero());
  c[n] = Tr::one();
  Matrix<T> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    T t = trace(Matrix<T>(a * m));
    c[n - k] = -t / Tr::from_int(static_cast<long>(k));
  }
  return c;
}

std::vector<Complex> eigenvalues(const MatrixF& a) {
  require_square(a, "eigenvalues");
  if (a.empty()) return {};
  Eigen::ComplexEigenSolver<EigenMat> solver(to_eigen(a), false);
  if (solver.info() != Eigen::Success) {
    throw SpectralError(ErrorKind::non_convergent, "eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

std::vector<Vector<Complex>> orthonormal_span(const std::vector<Vector<Complex>>& vectors, std::size_t dim,
                                              const Tolerance& tol, bool normalize) {
  std::vector<Vector<Complex>> out;
  if (vectors.empty()) return out;
  EigenMat m(dim, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    double norm = 0.0;
    for (const auto& x : vectors[j]) norm += std::norm(x);
    norm = std::sqrt(norm);
    double scale = normalize ? norm : 1.0;
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = scale > 0.0 ? vectors[j][i] / scale : Complex{};
  }
  Eigen::JacobiSVD<EigenMat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double cutoff = tol.rank_eps * (normalize ? s(0) : std::max(1.0, s(0)));
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) <= cutoff) break;
    Vector<Complex> u(dim);
    for (std::size_t i = 0; i < dim; ++i) u[i] = svd.matrixU()(i, k);
    out.push_back(std::move(u));
  }
  return out;
}

template MatrixF inverse(const MatrixF&, const Tolerance&);
template MatrixQ inverse(const MatrixQ&, const Tolerance&);
template Complex determinant(const MatrixF&);
template GaussQ determinant(const MatrixQ&);
template std::vector<Complex> characteristic_polynomial(const MatrixF&);
template std::vector<GaussQ> characteristic_polynomial(const MatrixQ&);

}  // namespace spectracalc
