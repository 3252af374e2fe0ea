#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spectracalc/analogy.hpp"
#include "spectracalc/calculus.hpp"
#include "spectracalc/jordan.hpp"

namespace spectracalc {

struct DiscreteNode {
  Complex eigenvalue;
  std::size_t degree = 1;        // nilpotency degree m, the Jordan block size
  std::size_t multiplicity = 1;  // number of blocks at this eigenvalue
};

/// One quadrature node of a continuous spectral segment.
struct ContinuousNode {
  Complex eigenvalue;
  double weight = 0.0;
  std::size_t degree = 1;
};

/// Discrete eigenvalues plus a quadrature discretization of a continuous segment.
struct HybridOperatorSpec {
  std::vector<DiscreteNode> discrete;
  std::vector<ContinuousNode> continuous;
  MatrixF transform;

  std::size_t dimension() const;
  /// Distinct eigenvalues (to cluster_eps), disjoint parts, positive weights and
  /// degrees, and a square transform of the block dimension.
  void validate(const Tolerance& tol = {}) const;

  /// Midpoint nodes on the real interval [a, b], each of weight (b - a) / n.
  static std::vector<ContinuousNode> midpoint_nodes(double a, double b, std::size_t n, std::size_t degree = 1);
};

/// I + R / n with R uniform in [-1, 1) from a fixed 64-bit Mersenne Twister stream;
/// always invertible since the perturbation has spectral norm below 1.
MatrixF seeded_transform(std::size_t n, std::uint64_t seed);

enum class NodeOrigin { discrete, continuous };

struct HybridRealization {
  MatrixF matrix;
  JordanSpec<Complex> spec;        // one group per node, discrete nodes first
  SpectralFamily<Complex> family;  // from the spec, group index = node index
  std::vector<NodeOrigin> origins;  // per family item
  std::vector<MatrixF> node_projectors;  // F for discrete nodes, dE for continuous ones
  std::vector<Complex> node_eigenvalues;
  std::vector<std::size_t> node_degrees;
  std::vector<double> node_weights;  // 1 for discrete nodes
};

HybridRealization realize(const HybridOperatorSpec& spec, const Tolerance& tol = {});

/// Hybrid functional calculus with the spectral integral replaced by the node sum:
/// sum over nodes of f(lambda) F + sum_{q=1}^{m-1} f^(q)(lambda)/q! (X - lambda I)^q F.
MatrixF apply_hybrid(const SeriesFunction& f, const HybridOperatorSpec& spec, const SeriesOptions& opts = {},
                     const Tolerance& tol = {});

/// Multivariate version over every node tuple and discrete/continuous branch combination.
MatrixF apply_hybrid_multi(const SeriesFunction& f, std::span<const HybridOperatorSpec> specs,
                           const SeriesOptions& opts = {}, const TermMask& mask = {}, const Tolerance& tol = {});

/// sum over nodes of w * trace(a F) / (rank of F); approximates the spectral integral
/// of the diagonal of a against the node weights.
Complex weighted_trace(const MatrixF& a, const HybridRealization& r);

/// Ratios per node, with Props checks on the realizations.
struct RatioFunctionSpec {
  std::vector<Complex> discrete;
  std::vector<Complex> continuous;
  PropsReport props;
};

/// Per-node ratios when Y's node eigenvalues are nonzero multiples of X's and the
/// node degrees and multiplicities agree; nullopt otherwise. Throws
/// structural_mismatch when the discrete/continuous node counts differ.
std::optional<RatioFunctionSpec> analogous_hybrid(const HybridOperatorSpec& x, const HybridOperatorSpec& y,
                                                  const Tolerance& tol = {});

/// prod (1 + c_i lambda_i); the empty product is 1.
template <class T>
T fredholm_det(std::span<const T> eigenvalues, std::span<const T> ratios);

}  // namespace spectracalc
