#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "spectracalc/error.hpp"
#include "spectracalc/hybrid.hpp"

using namespace spectracalc;
namespace t = spectracalc::testing;

namespace {

HybridOperatorSpec mixed_spec(std::size_t n_nodes, std::uint64_t seed) {
  HybridOperatorSpec s;
  s.discrete = {{Complex(2.0, 0.0), 2, 1}, {Complex(-1.5, 0.5), 1, 2}};
  s.continuous = HybridOperatorSpec::midpoint_nodes(0.0, 1.0, n_nodes, 1);
  s.transform = seeded_transform(s.dimension(), seed);
  return s;
}

}  // namespace

TEST(HybridSpec, DimensionAndValidation) {
  auto s = mixed_spec(4, 1);
  EXPECT_EQ(s.dimension(), 2u + 2u + 4u);
  EXPECT_NO_THROW(s.validate());
  auto overlap = s;
  overlap.discrete.push_back({Complex(0.125, 0.0), 1, 1});
  overlap.transform = seeded_transform(overlap.dimension(), 1);
  EXPECT_THROW(overlap.validate(), SpectralError);
  auto bad_weight = s;
  bad_weight.continuous[0].weight = 0.0;
  EXPECT_THROW(bad_weight.validate(), SpectralError);
}

TEST(HybridSpec, MidpointNodes) {
  const auto nodes = HybridOperatorSpec::midpoint_nodes(0.0, 2.0, 4, 2);
  ASSERT_EQ(nodes.size(), 4u);
  EXPECT_DOUBLE_EQ(nodes[0].eigenvalue.real(), 0.25);
  EXPECT_DOUBLE_EQ(nodes[3].eigenvalue.real(), 1.75);
  for (const auto& n : nodes) {
    EXPECT_DOUBLE_EQ(n.weight, 0.5);
    EXPECT_EQ(n.degree, 2u);
  }
}

TEST(HybridSpec, SeededTransformDeterministic) {
  EXPECT_EQ(seeded_transform(5, 42), seeded_transform(5, 42));
  EXPECT_NE(seeded_transform(5, 42), seeded_transform(5, 43));
  const MatrixF a = seeded_transform(6, 7);
  EXPECT_LT(norm_inf(MatrixF(a * inverse(a) - MatrixF::identity(6))), 1e-12);
}

TEST(Realize, ProjectorsAreCompleteAndOrthogonal) {
  const auto r = realize(mixed_spec(5, 3));
  const std::size_t n = r.matrix.rows();
  MatrixF sum(n, n);
  for (const auto& f : r.node_projectors) sum += f;
  EXPECT_LT(max_abs(MatrixF(sum - MatrixF::identity(n))), 1e-10);
  for (std::size_t a = 0; a < r.node_projectors.size(); ++a) {
    const auto& fa = r.node_projectors[a];
    EXPECT_LT(max_abs(MatrixF(fa * fa - fa)), 1e-10);
    for (std::size_t b = 0; b < r.node_projectors.size(); ++b) {
      if (a != b) EXPECT_LT(max_abs(MatrixF(fa * r.node_projectors[b])), 1e-10);
    }
  }
  EXPECT_TRUE(verify_family(r.family).ok());
  EXPECT_EQ(r.node_eigenvalues.size(), 2u + 5u);
  EXPECT_DOUBLE_EQ(r.node_weights[0], 1.0);
  EXPECT_DOUBLE_EQ(r.node_weights[2], 0.2);
}

TEST(ApplyHybrid, MatchesJordanRoute) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = mixed_spec(3 + seed % 4, seed);
    const auto r = realize(s);
    for (const auto& f : {SeriesFunction::exp(), SeriesFunction::sin(), SeriesFunction::cos()}) {
      const MatrixF a = apply_hybrid(f, s);
      const MatrixF b = apply_single(f, r.family);
      EXPECT_LT(norm_inf(MatrixF(a - b)), 1e-9 * std::max(1.0, norm_inf(b)));
    }
  }
}

TEST(ApplyHybrid, MatchesSeriesOracle) {
  const auto s = mixed_spec(4, 11);
  const auto r = realize(s);
  const std::vector<MatrixF> xs{r.matrix};
  const MatrixF a = apply_hybrid(SeriesFunction::exp(), s);
  EXPECT_LT(norm_inf(MatrixF(a - series_oracle<Complex>(SeriesFunction::exp(), xs, 40))), 1e-8);
}

TEST(ApplyHybrid, DefectiveContinuousNodes) {
  HybridOperatorSpec s;
  s.discrete = {{Complex(3.0, 0.0), 1, 1}};
  s.continuous = HybridOperatorSpec::midpoint_nodes(-1.0, 1.0, 3, 2);
  s.transform = seeded_transform(s.dimension(), 5);
  const auto r = realize(s);
  const std::vector<MatrixF> xs{r.matrix};
  const MatrixF a = apply_hybrid(SeriesFunction::exp(), s);
  EXPECT_LT(norm_inf(MatrixF(a - series_oracle<Complex>(SeriesFunction::exp(), xs, 40))), 1e-8);
}

TEST(ApplyHybridMulti, MatchesJordanRouteAndAblationMatters) {
  HybridOperatorSpec a;
  a.discrete = {{Complex(0.5, 0.0), 2, 1}};
  a.continuous = HybridOperatorSpec::midpoint_nodes(-1.0, 0.0, 2, 1);
  a.transform = seeded_transform(a.dimension(), 21);
  HybridOperatorSpec b;
  b.discrete = {{Complex(-0.25, 0.0), 3, 1}};
  b.continuous = HybridOperatorSpec::midpoint_nodes(1.0, 2.0, 1, 1);
  b.transform = seeded_transform(b.dimension(), 22);
  ASSERT_EQ(a.dimension(), b.dimension());
  const std::vector<HybridOperatorSpec> specs{a, b};
  const auto f = SeriesFunction::exp_sum(2);
  const MatrixF full = apply_hybrid_multi(f, specs);
  const std::vector<SpectralFamily<Complex>> fams{realize(a).family, realize(b).family};
  EXPECT_LT(norm_inf(MatrixF(full - apply_multi<Complex>(f, fams))), 1e-9);
  const std::vector<MatrixF> xs{realize(a).matrix, realize(b).matrix};
  EXPECT_LT(norm_inf(MatrixF(full - series_oracle<Complex>(f, xs, 40))), 1e-8);
  for (TermPattern p = 1; p < 4; ++p) {
    const MatrixF ablated = apply_hybrid_multi(f, specs, {}, TermMask::all_but(2, p));
    EXPECT_GT(norm_inf(MatrixF(full - ablated)), 1e-3) << "pattern " << p;
  }
}

TEST(WeightedTrace, MidpointRuleConvergesQuadratically) {
  // sum of w exp(lambda) over midpoint nodes tends to e - 1 on [0, 1]
  const double exact = std::exp(1.0) - 1.0;
  std::vector<double> errors;
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    HybridOperatorSpec s;
    s.continuous = HybridOperatorSpec::midpoint_nodes(0.0, 1.0, n, 1);
    s.transform = seeded_transform(n, 9);
    const auto r = realize(s);
    const Complex got = weighted_trace(apply_hybrid(SeriesFunction::exp(), s), r);
    errors.push_back(std::abs(got - Complex(exact, 0.0)));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    EXPECT_GT(ratio, 4.0 / 1.5);
    EXPECT_LT(ratio, 4.0 * 1.5);
  }
}

TEST(AnalogousHybrid, SelfAndScaled) {
  const auto x = mixed_spec(3, 4);
  const auto self = analogous_hybrid(x, x);
  ASSERT_TRUE(self.has_value());
  for (const auto& c : self->discrete) EXPECT_LT(std::abs(c - Complex(1.0, 0.0)), 1e-12);
  for (const auto& c : self->continuous) EXPECT_LT(std::abs(c - Complex(1.0, 0.0)), 1e-12);
  EXPECT_TRUE(self->props.passed());

  auto y = x;
  for (auto& d : y.discrete) d.eigenvalue *= 2.0;
  for (auto& c : y.continuous) c.eigenvalue *= 2.0;
  const auto doubled = analogous_hybrid(x, y);
  ASSERT_TRUE(doubled.has_value());
  for (const auto& c : doubled->discrete) EXPECT_LT(std::abs(c - Complex(2.0, 0.0)), 1e-12);
  EXPECT_TRUE(doubled->props.passed());
  EXPECT_EQ(doubled->props.trace.status, PropStatus::pass);
  EXPECT_EQ(doubled->props.determinant.status, PropStatus::pass);
}

TEST(AnalogousHybrid, DegreeMismatchAndStructure) {
  const auto x = mixed_spec(3, 4);
  auto y = x;
  y.discrete[0].degree = 1;
  y.transform = seeded_transform(y.dimension(), 4);
  EXPECT_FALSE(analogous_hybrid(x, y).has_value());
  auto z = x;
  z.continuous.pop_back();
  z.transform = seeded_transform(z.dimension(), 4);
  try {
    analogous_hybrid(x, z);
    FAIL();
  } catch (const SpectralError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::structural_mismatch);
  }
}

TEST(Fredholm, Examples) {
  EXPECT_EQ(fredholm_det<Complex>({}, {}), Complex(1.0, 0.0));
  const std::vector<Complex> eig{Complex(1.0, 0.0), Complex(0.5, 0.0)}, one{Complex(1.0, 0.0), Complex(1.0, 0.0)};
  EXPECT_LT(std::abs(fredholm_det<Complex>(eig, one) - Complex(3.0, 0.0)), 1e-15);
  const std::vector<GaussQ> qe{GaussQ(1), GaussQ(mpq_class(1, 2))}, qc{GaussQ(1), GaussQ(1)};
  EXPECT_EQ(fredholm_det<GaussQ>(qe, qc), GaussQ(3));
  const std::vector<Complex> bad{Complex(1.0, 0.0)};
  EXPECT_THROW(fredholm_det<Complex>(eig, bad), SpectralError);
}

TEST(Fredholm, MatchesDeterminantOfDiagonal) {
  std::vector<Complex> eig, ratio;
  for (int i = 1; i <= 30; ++i) {
    eig.push_back(Complex(std::ldexp(1.0, -i), 0.0));
    ratio.push_back(Complex(1.0, 0.0));
  }
  std::vector<Complex> diag;
  for (const auto& e : eig) diag.push_back(Complex(1.0, 0.0) + e);
  const MatrixF d = MatrixF::diagonal(diag);
  EXPECT_LT(std::abs(fredholm_det<Complex>(eig, ratio) - determinant(d)), 1e-12);
}
