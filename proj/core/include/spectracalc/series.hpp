#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectracalc/matrix.hpp"
#include "spectracalc/scalar.hpp"

namespace spectracalc {

using Exponents = std::vector<std::size_t>;

enum class SeriesKind {
  exp,        // exp(z)
  sin,        // sin(z)
  cos,        // cos(z)
  geometric,  // 1 / (1 - z), radius 1
  exp_sum,    // exp(z_1 + ... + z_r)
  sparse,     // finitely many exact coefficients
  generator,  // univariate coefficient callback, float only
};

std::string_view to_string(SeriesKind kind) noexcept;

inline constexpr double infinite_radius = std::numeric_limits<double>::infinity();

struct SeriesOptions {
  double series_eps = 1e-15;
  std::size_t max_terms = 100000;
  /// Partial sums stop once this many consecutive terms fall below the threshold,
  /// so series with vanishing coefficients (odd or even ones) do not stop early.
  std::size_t quiet_window = 8;

  /// Defaults, with max_terms taken from SPECTRACALC_MAX_TERMS when set.
  static SeriesOptions from_environment();
};

/// Power series in r variables, sum over l of a_l z_1^l_1 ... z_r^l_r.
class SeriesFunction {
 public:
  static SeriesFunction exp();
  static SeriesFunction sin();
  static SeriesFunction cos();
  static SeriesFunction geometric();
  static SeriesFunction exp_sum(std::size_t arity);
  /// Finite sparse series; radii default to infinite.
  static SeriesFunction sparse(std::size_t arity, std::map<Exponents, GaussQ> coeffs, std::vector<double> radii = {});
  /// Univariate polynomial with coefficients a_0, a_1, ...
  static SeriesFunction polynomial(std::span<const GaussQ> coeffs);
  /// z_1 * ... * z_r
  static SeriesFunction product(std::size_t arity);
  /// z_1 + ... + z_r
  static SeriesFunction sum(std::size_t arity);
  static SeriesFunction generator(std::function<Complex(std::size_t)> coeff, double radius, std::string name = "custom");

  SeriesKind kind() const noexcept { return kind_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::string& name() const noexcept { return name_; }
  const std::map<Exponents, GaussQ>& sparse_coefficients() const noexcept { return coeffs_; }

  /// Exact derivatives and values available in exact mode (sparse only).
  bool supports_exact() const noexcept { return kind_ == SeriesKind::sparse; }

  /// Largest total degree with a nonzero coefficient, or nullopt for infinite series.
  std::optional<std::size_t> degree() const;

  /// a_l for an exponent tuple of length arity().
  Complex coefficient(const Exponents& l) const;
  GaussQ coefficient_exact(const Exponents& l) const;

  /// Throws out_of_radius unless |z_l| < R_l (1 - 1e-12) for every finite radius.
  void check_radius(std::span<const Complex> z) const;

  /// Mixed partial d^{q_1 + ... + q_r} f / dz_1^q_1 ... dz_r^q_r at z.
  Complex partial(const Exponents& q, std::span<const Complex> z, const SeriesOptions& opts = {}) const;
  GaussQ partial_exact(const Exponents& q, std::span<const GaussQ> z) const;

 private:
  SeriesKind kind_ = SeriesKind::sparse;
  std::size_t arity_ = 1;
  std::vector<double> radii_;
  std::string name_;
  std::map<Exponents, GaussQ> coeffs_;
  std::function<Complex(std::size_t)> generator_;
};

/// f(z) with radius check; closed forms for builtins, truncated partial sums otherwise.
Complex eval_scalar(const SeriesFunction& f, std::span<const Complex> z, const SeriesOptions& opts = {});
GaussQ eval_scalar(const SeriesFunction& f, std::span<const GaussQ> z);

/// sum over total degree <= max_degree of a_l X_1^l_1 ... X_r^l_r, factors in argument order.
template <class T>
Matrix<T> series_oracle(const SeriesFunction& f, std::span<const Matrix<T>> mats, std::size_t max_degree);

}  // namespace spectracalc
