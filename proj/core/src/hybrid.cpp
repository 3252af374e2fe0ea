#include "spectracalc/hybrid.hpp"

#include <cmath>
#include <random>

#include "spectracalc/error.hpp"

namespace spectracalc {

std::size_t HybridOperatorSpec::dimension() const {
  std::size_t n = 0;
  for (const auto& d : discrete) n += d.degree * d.multiplicity;
  for (const auto& c : continuous) n += c.degree;
  return n;
}

void HybridOperatorSpec::validate(const Tolerance& tol) const {
  tol.validate();
  if (discrete.empty() && continuous.empty()) throw SpectralError(ErrorKind::invalid_argument, "spec has no nodes");
  std::vector<Complex> eigs;
  for (const auto& d : discrete) {
    if (d.degree == 0 || d.multiplicity == 0)
      throw SpectralError(ErrorKind::invalid_argument, "discrete node degree and multiplicity must be positive");
    eigs.push_back(d.eigenvalue);
  }
  for (const auto& c : continuous) {
    if (c.degree == 0) throw SpectralError(ErrorKind::invalid_argument, "continuous node degree must be positive");
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw SpectralError(ErrorKind::invalid_argument, "continuous node weights must be positive");
    eigs.push_back(c.eigenvalue);
  }
  for (std::size_t a = 0; a < eigs.size(); ++a) {
    for (std::size_t b = a + 1; b < eigs.size(); ++b) {
      if (std::abs(eigs[a] - eigs[b]) <= tol.cluster_eps) {
        const bool across = a < discrete.size() && b >= discrete.size();
        throw SpectralError(ErrorKind::invalid_argument,
                            across ? "discrete and continuous spectra overlap" : "node eigenvalues are not distinct");
      }
    }
  }
  const std::size_t n = dimension();
  if (transform.rows() != n || transform.cols() != n)
    throw SpectralError(ErrorKind::dimension_mismatch, "transform is " + std::to_string(transform.rows()) + "x" +
                                                           std::to_string(transform.cols()) + ", nodes need " +
                                                           std::to_string(n));
}

std::vector<ContinuousNode> HybridOperatorSpec::midpoint_nodes(double a, double b, std::size_t n, std::size_t degree) {
  if (n == 0 || !(b > a)) throw SpectralError(ErrorKind::invalid_argument, "need n >= 1 nodes on an interval a < b");
  std::vector<ContinuousNode> out;
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back({{a + (static_cast<double>(j) + 0.5) * h, 0.0}, h, degree});
  return out;
}

MatrixF seeded_transform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  MatrixF u = MatrixF::identity(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Raw engine bits rather than a distribution, so values are identical across standard libraries.
      const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      u(i, j) += (2.0 * unit - 1.0) * scale;
    }
  }
  return u;
}

HybridRealization realize(const HybridOperatorSpec& spec, const Tolerance& tol) {
  spec.validate(tol);
  HybridRealization r;
  r.spec.transform = spec.transform;
  for (const auto& d : spec.discrete) {
    r.spec.groups.push_back({d.eigenvalue, std::vector<std::size_t>(d.multiplicity, d.degree)});
    r.node_eigenvalues.push_back(d.eigenvalue);
    r.node_degrees.push_back(d.degree);
    r.node_weights.push_back(1.0);
  }
  for (const auto& c : spec.continuous) {
    r.spec.groups.push_back({c.eigenvalue, {c.degree}});
    r.node_eigenvalues.push_back(c.eigenvalue);
    r.node_degrees.push_back(c.degree);
    r.node_weights.push_back(c.weight);
  }
  r.matrix = assemble(r.spec, tol);
  r.family = extract_family(r.spec, tol);
  const std::size_t n = spec.dimension();
  r.node_projectors.assign(r.spec.groups.size(), MatrixF(n, n));
  for (const auto& it : r.family.items) {
    r.origins.push_back(it.group < spec.discrete.size() ? NodeOrigin::discrete : NodeOrigin::continuous);
    r.node_projectors[it.group] += it.projector;
  }
  return r;
}

namespace {

double inverse_factorial(std::size_t q) {
  double r = 1.0;
  for (std::size_t i = 2; i <= q; ++i) r /= static_cast<double>(i);
  return r;
}

// F, (X - lambda I) F, ..., (X - lambda I)^(m-1) F per node.
std::vector<std::vector<MatrixF>> node_factors(const HybridRealization& r) {
  const std::size_t n = r.matrix.rows();
  std::vector<std::vector<MatrixF>> out;
  for (std::size_t node = 0; node < r.node_projectors.size(); ++node) {
    MatrixF shifted = r.matrix;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= r.node_eigenvalues[node];
    std::vector<MatrixF> f{r.node_projectors[node]};
    for (std::size_t q = 1; q < r.node_degrees[node]; ++q) f.push_back(shifted * f.back());
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

MatrixF apply_hybrid(const SeriesFunction& f, const HybridOperatorSpec& spec, const SeriesOptions& opts,
                     const Tolerance& tol) {
  const HybridOperatorSpec* one = &spec;
  return apply_hybrid_multi(f, std::span<const HybridOperatorSpec>(one, 1), opts, {}, tol);
}

MatrixF apply_hybrid_multi(const SeriesFunction& f, std::span<const HybridOperatorSpec> specs,
                           const SeriesOptions& opts, const TermMask& mask, const Tolerance& tol) {
  const std::size_t r = specs.size();
  if (r != f.arity())
    throw SpectralError(ErrorKind::dimension_mismatch, "function of arity " + std::to_string(f.arity()) +
                                                           " given " + std::to_string(r) + " operators");
  std::vector<HybridRealization> reals;
  for (const auto& s : specs) reals.push_back(realize(s, tol));
  const std::size_t n = reals[0].matrix.rows();
  for (const auto& re : reals)
    if (re.matrix.rows() != n) throw SpectralError(ErrorKind::dimension_mismatch, "realized dimensions differ");
  for (std::size_t l = 0; l < r; ++l) {
    for (const auto& lambda : reals[l].node_eigenvalues) {
      std::vector<Complex> z(r, Complex{});
      z[l] = lambda;
      f.check_radius(z);
    }
  }
  std::vector<std::vector<std::vector<MatrixF>>> factors;
  for (const auto& re : reals) factors.push_back(node_factors(re));

  const auto patterns = term_patterns(r);
  MatrixF out(n, n);
  std::vector<std::size_t> node(r, 0);
  std::vector<Complex> z(r);
  while (true) {
    for (std::size_t l = 0; l < r; ++l) z[l] = reals[l].node_eigenvalues[node[l]];
    for (TermPattern p : patterns) {
      if (!mask.allows(p)) continue;
      Exponents q(r, 0);
      std::vector<std::size_t> selected;
      bool possible = true;
      for (std::size_t l = 0; l < r; ++l) {
        if (!(p >> l & 1U)) continue;
        if (reals[l].node_degrees[node[l]] < 2) possible = false;
        selected.push_back(l);
        q[l] = 1;
      }
      if (!possible) continue;
      while (true) {
        Complex coeff = f.partial(q, z, opts);
        if (coeff != Complex{}) {
          for (std::size_t l = 0; l < r; ++l) coeff *= inverse_factorial(q[l]);
          MatrixF term = factors[0][node[0]][q[0]];
          for (std::size_t l = 1; l < r; ++l) term = term * factors[l][node[l]][q[l]];
          out.add_scaled(coeff, term);
        }
        bool advanced = false;
        for (std::size_t j = selected.size(); j > 0 && !advanced; --j) {
          const std::size_t l = selected[j - 1];
          if (q[l] + 1 < reals[l].node_degrees[node[l]]) {
            ++q[l];
            advanced = true;
          } else {
            q[l] = 1;
          }
        }
        if (!advanced) break;
      }
    }
    std::size_t l = r;
    while (true) {
      --l;
      if (++node[l] < reals[l].node_eigenvalues.size()) break;
      node[l] = 0;
      if (l == 0) return out;
    }
  }
}

Complex weighted_trace(const MatrixF& a, const HybridRealization& r) {
  Complex total{};
  for (std::size_t node = 0; node < r.node_projectors.size(); ++node) {
    const auto& fp = r.node_projectors[node];
    const double rank = std::round(trace(fp).real());
    total += r.node_weights[node] * trace(MatrixF(a * fp)) / rank;
  }
  return total;
}

std::optional<RatioFunctionSpec> analogous_hybrid(const HybridOperatorSpec& x, const HybridOperatorSpec& y,
                                                  const Tolerance& tol) {
  if (x.discrete.size() != y.discrete.size() || x.continuous.size() != y.continuous.size()) {
    throw SpectralError(ErrorKind::structural_mismatch,
                        "node layouts differ: " + std::to_string(x.discrete.size()) + "+" +
                            std::to_string(x.continuous.size()) + " vs " + std::to_string(y.discrete.size()) + "+" +
                            std::to_string(y.continuous.size()) + " discrete+continuous nodes");
  }
  auto ratio = [&](Complex lx, Complex ly) -> std::optional<Complex> {
    const bool zx = std::abs(lx) <= tol.cluster_eps;
    const bool zy = std::abs(ly) <= tol.cluster_eps;
    if (zx && zy) return Complex{1.0};
    if (zx || zy) return std::nullopt;
    return ly / lx;
  };
  RatioFunctionSpec out;
  RatioProfile<Complex> profile;
  for (std::size_t i = 0; i < x.discrete.size(); ++i) {
    const auto &dx = x.discrete[i], &dy = y.discrete[i];
    if (dx.degree != dy.degree || dx.multiplicity != dy.multiplicity) return std::nullopt;
    auto c = ratio(dx.eigenvalue, dy.eigenvalue);
    if (!c) return std::nullopt;
    out.discrete.push_back(*c);
    profile.matches.push_back({i, i, *c});
  }
  for (std::size_t j = 0; j < x.continuous.size(); ++j) {
    const auto &cx = x.continuous[j], &cy = y.continuous[j];
    if (cx.degree != cy.degree) return std::nullopt;
    auto c = ratio(cx.eigenvalue, cy.eigenvalue);
    if (!c) return std::nullopt;
    out.continuous.push_back(*c);
    const std::size_t g = x.discrete.size() + j;
    profile.matches.push_back({g, g, *c});
  }
  const auto rx = realize(x, tol);
  const auto ry = realize(y, tol);
  out.props = verify_props(rx.spec, ry.spec, profile, tol);
  return out;
}

template <class T>
T fredholm_det(std::span<const T> eigenvalues, std::span<const T> ratios) {
  if (eigenvalues.size() != ratios.size())
    throw SpectralError(ErrorKind::dimension_mismatch, std::to_string(eigenvalues.size()) + " eigenvalues but " +
                                                           std::to_string(ratios.size()) + " ratios");
  T det = ScalarTraits<T>::one();
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) det *= ScalarTraits<T>::one() + ratios[i] * eigenvalues[i];
  return det;
}

template Complex fredholm_det(std::span<const Complex>, std::span<const Complex>);
template GaussQ fredholm_det(std::span<const GaussQ>, std::span<const GaussQ>);

}  // namespace spectracalc
