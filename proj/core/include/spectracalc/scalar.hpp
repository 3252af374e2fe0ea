#pragma once

#include <cmath>
#include <complex>
#include <gmpxx.h>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>

#include "spectracalc/error.hpp"

namespace spectracalc {

using Complex = std::complex<double>;

/// Gaussian rational re + i*im with both parts in Q. Arithmetic is closed and exact.
class GaussQ {
 public:
  GaussQ() = default;
  GaussQ(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussQ(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  /// Parses "p/q", "p", "-1.25" or "1e-3" (decimal strings are converted exactly).
  static mpq_class parse_rational(std::string_view text);
  /// Exact binary value of a finite double.
  static mpq_class from_double(double value);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  GaussQ conj() const { return GaussQ(re_, -im_); }
  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussQ& operator+=(const GaussQ& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussQ& operator*=(const GaussQ& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussQ& operator/=(const GaussQ& o);

  friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
  friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
  friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
  friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }
  friend GaussQ operator-(const GaussQ& a) { return GaussQ(-a.re_, -a.im_); }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& os, const GaussQ& z);

/// Lexicographic (re, im) order used for canonical eigenvalue ordering.
bool lex_less(const Complex& a, const Complex& b);
bool lex_less(const GaussQ& a, const GaussQ& b);

/// Scalar-mode traits. Float comparisons take an explicit tolerance; exact ones ignore it.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static double magnitude(const Complex& z) { return std::abs(z); }
  static bool is_zero(const Complex& z, double eps) { return std::abs(z) <= eps; }
  static bool equal(const Complex& a, const Complex& b, double eps) { return std::abs(a - b) <= eps; }
  static Complex to_complex(const Complex& z) { return z; }
};

template <>
struct ScalarTraits<GaussQ> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static GaussQ zero() { return GaussQ(); }
  static GaussQ one() { return GaussQ(1); }
  static GaussQ from_int(long v) { return GaussQ(v); }
  static double magnitude(const GaussQ& z) { return std::sqrt(z.norm().get_d()); }
  static bool is_zero(const GaussQ& z, double /*eps*/) { return z.is_zero(); }
  static bool equal(const GaussQ& a, const GaussQ& b, double /*eps*/) { return a == b; }
  static Complex to_complex(const GaussQ& z) { return z.to_complex(); }
};

/// Thresholds for float-mode decisions. Exact mode ignores all of them.
struct Tolerance {
  double rank_eps = 1e-9;
  double recon_eps = 1e-8;
  double cluster_eps = 1e-7;

  /// Throws invalid_argument unless every field is finite and nonnegative.
  void validate() const;
};

}  // namespace spectracalc
