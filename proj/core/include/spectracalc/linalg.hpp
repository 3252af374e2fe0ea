#pragma once

#include <cstddef>
#include <vector>

#include "spectracalc/matrix.hpp"

namespace spectracalc {

template <class T>
using Vector = std::vector<T>;

/// Inverse by Gauss-Jordan elimination. Float mode first decides invertibility by
/// singular values (rank_eps relative to the largest one); exact mode is exact.
template <class T>
Matrix<T> inverse(const Matrix<T>& a, const Tolerance& tol = {});

/// Numerical rank: count of singular values above rank_eps * sigma_max (float),
/// or exact rank by column-pivoted elimination (exact).
template <class T>
std::size_t rank_with_tol(const Matrix<T>& a, const Tolerance& tol = {});

/// Basis of Null(a) with cols - rank(a) vectors. Float mode returns an orthonormal
/// basis (right singular vectors); exact mode returns the reduced-row-echelon basis.
template <class T>
std::vector<Vector<T>> null_space_basis(const Matrix<T>& a, const Tolerance& tol = {});

template <class T>
T determinant(const Matrix<T>& a);

/// Coefficients c[0..n] of det(x I - a), so c[n] = 1 (Faddeev-LeVerrier).
template <class T>
std::vector<T> characteristic_polynomial(const Matrix<T>& a);

/// All eigenvalues of a square float matrix (QR iteration via Eigen).
std::vector<Complex> eigenvalues(const MatrixF& a);

/// Singular values in nonincreasing order.
std::vector<double> singular_values(const MatrixF& a);

/// Orthonormal basis of span(vectors) (left singular vectors). With normalize, each
/// vector is scaled to unit length first and the cutoff is rank_eps * sigma_max;
/// otherwise magnitudes are kept and the cutoff is rank_eps * max(1, sigma_max).
std::vector<Vector<Complex>> orthonormal_span(const std::vector<Vector<Complex>>& vectors, std::size_t dim,
                                              const Tolerance& tol, bool normalize = true);

template <>
std::size_t rank_with_tol(const MatrixF& a, const Tolerance& tol);
template <>
std::size_t rank_with_tol(const MatrixQ& a, const Tolerance& tol);
template <>
std::vector<Vector<Complex>> null_space_basis(const MatrixF& a, const Tolerance& tol);
template <>
std::vector<Vector<GaussQ>> null_space_basis(const MatrixQ& a, const Tolerance& tol);

}  // namespace spectracalc
