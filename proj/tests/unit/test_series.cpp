#include <gtest/gtest.h>

#include <cstdlib>

#include "generators.hpp"
#include "spectracalc/error.hpp"
#include "spectracalc/series.hpp"

using namespace spectracalc;
namespace t = spectracalc::testing;

namespace {

Complex at(const SeriesFunction& f, Complex z, const SeriesOptions& o = {}) {
  return eval_scalar(f, std::span<const Complex>(&z, 1), o);
}

}  // namespace

TEST(EvalScalar, Examples) {
  EXPECT_EQ(at(SeriesFunction::exp(), 0.0), Complex(1.0));
  EXPECT_NEAR(std::abs(at(SeriesFunction::geometric(), 0.5) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(at(SeriesFunction::sin(), 0.3) - std::sin(0.3)), 0.0, 1e-15);
}

TEST(EvalScalar, TaylorPartialSumsMatchClosedForm) {
  // library-independent partial sums of the sine series
  const double z = 0.3;
  double sum = 0.0, term = z;
  for (int k = 0; k < 20; ++k) {
    sum += term;
    term *= -z * z / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  EXPECT_NEAR(at(SeriesFunction::sin(), z).real(), sum, 1e-12);
}

TEST(EvalScalar, GeneratorSeriesTruncates) {
  const auto sin_gen = SeriesFunction::generator(
      [](std::size_t l) { return Complex(SeriesFunction::sin().coefficient({l})); }, infinite_radius, "sin-series");
  for (double z : {0.0, 0.3, -1.2, 2.5}) EXPECT_NEAR(at(sin_gen, z).real(), std::sin(z), 1e-13) << z;
  const auto geo = SeriesFunction::generator([](std::size_t) { return Complex(1.0); }, 1.0, "geo");
  EXPECT_NEAR(std::abs(at(geo, Complex(0.5, 0.2)) - 1.0 / (1.0 - Complex(0.5, 0.2))), 0.0, 1e-12);
}

TEST(EvalScalar, RadiusEnforced) {
  try {
    at(SeriesFunction::geometric(), 1.0);
    FAIL();
  } catch (const SpectralError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::out_of_radius);
  }
  EXPECT_THROW(at(SeriesFunction::geometric(), Complex(0.0, -1.5)), SpectralError);
  EXPECT_NO_THROW(at(SeriesFunction::exp(), 1e6));
}

TEST(EvalScalar, NonConvergentWithinCap) {
  const auto geo = SeriesFunction::generator([](std::size_t) { return Complex(1.0); }, 1.0, "geo");
  SeriesOptions o;
  o.max_terms = 50;
  try {
    at(geo, 0.999, o);
    FAIL();
  } catch (const SpectralError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_convergent);
  }
}

TEST(SeriesOptions, EnvironmentOverride) {
  ::setenv("SPECTRACALC_MAX_TERMS", "1234", 1);
  EXPECT_EQ(SeriesOptions::from_environment().max_terms, 1234u);
  ::setenv("SPECTRACALC_MAX_TERMS", "many", 1);
  EXPECT_THROW(SeriesOptions::from_environment(), SpectralError);
  ::unsetenv("SPECTRACALC_MAX_TERMS");
  EXPECT_EQ(SeriesOptions::from_environment().max_terms, 100000u);
}

TEST(Derivatives, ClosedFormsMatchTermwiseSeries) {
  // f^(q)(z) = sum a_l l!/(l-q)! z^(l-q), summed directly from the coefficients
  t::Rng rng(21);
  for (const auto& f : {SeriesFunction::exp(), SeriesFunction::sin(), SeriesFunction::cos(), SeriesFunction::geometric()}) {
    const double radius = f.radii()[0];
    for (int sample = 0; sample < 10; ++sample) {
      const double r = std::isinf(radius) ? t::uniform_real(rng, 0.0, 1.5) : t::uniform_real(rng, 0.0, 0.5);
      const Complex z = std::polar(r, t::uniform_real(rng, 0.0, 6.283));
      for (std::size_t q = 0; q <= 4; ++q) {
        Complex sum{};
        for (std::size_t l = q; l < q + 200; ++l) {
          double falling = 1.0;
          for (std::size_t j = 0; j < q; ++j) falling *= static_cast<double>(l - j);
          sum += f.coefficient({l}) * falling * std::pow(z, static_cast<double>(l - q));
        }
        EXPECT_NEAR(std::abs(f.partial({q}, std::span<const Complex>(&z, 1)) - sum), 0.0, 1e-10)
            << f.name() << " q=" << q;
      }
    }
  }
}

TEST(Derivatives, SparseExactCoefficientShift) {
  // f(z1, z2) = 3 z1^2 z2 + z2^3
  const auto f = SeriesFunction::sparse(2, {{{2, 1}, GaussQ(3)}, {{0, 3}, GaussQ(1)}});
  const std::vector<GaussQ> z{GaussQ(2), GaussQ(mpq_class(1, 2))};
  EXPECT_EQ(f.partial_exact({0, 0}, z), GaussQ(mpq_class(49, 8)));
  EXPECT_EQ(f.partial_exact({1, 0}, z), GaussQ(6));        // 6 z1 z2
  EXPECT_EQ(f.partial_exact({1, 1}, z), GaussQ(12));       // 6 z1
  EXPECT_EQ(f.partial_exact({0, 2}, z), GaussQ(3));        // 6 z2
  EXPECT_EQ(f.partial_exact({3, 0}, z), GaussQ());         // vanishes
  const std::vector<Complex> zf{2.0, 0.5};
  EXPECT_NEAR(std::abs(f.partial({1, 1}, zf) - 12.0), 0.0, 1e-14);
}

TEST(Derivatives, ExpSumAllPartialsEqual) {
  const auto f = SeriesFunction::exp_sum(3);
  const std::vector<Complex> z{0.1, Complex(0.2, 0.3), -0.4};
  const Complex e = std::exp(z[0] + z[1] + z[2]);
  EXPECT_NEAR(std::abs(f.partial({2, 0, 1}, z) - e), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.coefficient({2, 0, 1}) - 0.5), 0.0, 1e-15);
}

TEST(ExactSupport, OnlySparse) {
  EXPECT_TRUE(SeriesFunction::product(2).supports_exact());
  EXPECT_FALSE(SeriesFunction::exp().supports_exact());
  EXPECT_THROW(SeriesFunction::exp().coefficient_exact({1}), SpectralError);
  EXPECT_THROW(SeriesFunction::sparse(2, {{{1}, GaussQ(1)}}), SpectralError);
  EXPECT_THROW(SeriesFunction::sparse(1, {}, {-1.0}), SpectralError);
}

TEST(SeriesOracle, IdentityAndNilpotent) {
  const auto id = SeriesFunction::sparse(1, {{{1}, GaussQ(1)}});
  const MatrixF x{{1.0, 2.0}, {Complex(0.0, 1.0), -3.0}};
  const std::vector<MatrixF> xs{x};
  EXPECT_EQ(series_oracle<Complex>(id, xs, 1), x);

  MatrixF j4(4, 4);
  for (std::size_t i = 0; i + 1 < 4; ++i) j4(i, i + 1) = 1.0;
  const std::vector<MatrixF> js{j4};
  const auto e3 = series_oracle<Complex>(SeriesFunction::exp(), js, 3);
  const auto e10 = series_oracle<Complex>(SeriesFunction::exp(), js, 10);
  EXPECT_EQ(e3, e10);
  EXPECT_NEAR(std::abs(e3(0, 3) - 1.0 / 6.0), 0.0, 1e-15);
}

TEST(SeriesOracle, ConvergenceWitness) {
  t::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixF x(4, 4);
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = Complex(t::uniform_real(rng, -1, 1), t::uniform_real(rng, -1, 1));
    x *= Complex(1.0 / norm_inf(x));  // ||X||_inf = 1
    const std::vector<MatrixF> xs{x};
    const auto d20 = series_oracle<Complex>(SeriesFunction::exp(), xs, 20);
    const auto d25 = series_oracle<Complex>(SeriesFunction::exp(), xs, 25);
    EXPECT_LT(norm_inf(MatrixF(d20 - d25)), 1e-12);
  }
}

TEST(SeriesOracle, ArgumentOrderAndArity) {
  const MatrixQ a{{0, 1}, {0, 0}}, b{{0, 0}, {1, 0}};
  const std::vector<MatrixQ> ab{a, b};
  EXPECT_EQ(series_oracle<GaussQ>(SeriesFunction::product(2), ab, 2), a * b);
  const std::vector<MatrixQ> one{a};
  EXPECT_THROW(series_oracle<GaussQ>(SeriesFunction::product(2), one, 2), SpectralError);
  EXPECT_THROW(series_oracle<GaussQ>(SeriesFunction::exp(), one, 2), SpectralError);
}
