#include "spectracalc/jordan.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace spectracalc {

std::string_view to_string(FamilyCheck check) noexcept {
  switch (check) {
    case FamilyCheck::completeness: return "completeness";
    case FamilyCheck::idempotence: return "idempotence";
    case FamilyCheck::orthogonality: return "orthogonality";
    case FamilyCheck::nilpotency: return "nilpotency";
    case FamilyCheck::projector_nilpotent: return "projector-nilpotent";
  }
  return "unknown";
}

namespace {

template <class T>
bool eigen_equal(const T& a, const T& b, const Tolerance& tol) {
  return ScalarTraits<T>::equal(a, b, tol.cluster_eps);
}

template <class T>
Matrix<T> shifted(const Matrix<T>& x, const T& lambda) {
  Matrix<T> b = x;
  for (std::size_t i = 0; i < b.rows(); ++i) b(i, i) -= lambda;
  return b;
}

// Rank decisions on (x - lambda I)^j are made against rank_eps * max(1, sigma_max(x))^j
// rather than the power's own largest singular value, so nearly coincident
// eigenvalues are not mistaken for well separated ones.
template <class T>
Tolerance power_tolerance(const Tolerance& tol, const Matrix<T>& x, const Matrix<T>& power, std::size_t j) {
  if constexpr (ScalarTraits<T>::exact) {
    return tol;
  } else {
    const auto sx = singular_values(x);
    const auto sp = singular_values(power);
    const double scale = std::max(1.0, sx.empty() ? 0.0 : sx.front());
    const double top = sp.empty() ? 0.0 : sp.front();
    Tolerance t = tol;
    if (top > 0.0) t.rank_eps = tol.rank_eps * std::pow(scale, static_cast<double>(j)) / top;
    return t;
  }
}

template <class T>
Vector<T> mat_vec(const Matrix<T>& a, const Vector<T>& v) {
  Vector<T> out(a.rows(), ScalarTraits<T>::zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

// Scale so that the first component of largest magnitude becomes 1.
Vector<Complex> normalize_head(Vector<Complex> v) {
  double best = 0.0;
  for (const auto& x : v) best = std::max(best, std::abs(x));
  if (best == 0.0) return v;
  for (const auto& x : v) {
    if (std::abs(x) >= best * (1.0 - 1e-12)) {
      Complex pivot = x;
      for (auto& y : v) y /= pivot;
      break;
    }
  }
  return v;
}

Vector<GaussQ> normalize_head(Vector<GaussQ> v) {
  mpq_class best = 0;
  for (const auto& x : v) best = std::max(best, x.norm());
  if (sgn(best) == 0) return v;
  for (const auto& x : v) {
    if (x.norm() == best) {
      GaussQ pivot = x;
      for (auto& y : v) y /= pivot;
      break;
    }
  }
  return v;
}

// Pick `count` vectors of `candidates` (a basis of Null(B^s)) independent modulo span(taken).
std::vector<Vector<Complex>> choose_heads(const std::vector<Vector<Complex>>& taken,
                                          const std::vector<Vector<Complex>>& candidates, std::size_t count,
                                          std::size_t dim, const Tolerance& tol) {
  auto q = orthonormal_span(taken, dim, tol);
  std::vector<Vector<Complex>> residuals;
  for (const auto& c : candidates) {
    Vector<Complex> r = c;
    for (const auto& u : q) {
      Complex dot{};
      for (std::size_t i = 0; i < dim; ++i) dot += std::conj(u[i]) * c[i];
      for (std::size_t i = 0; i < dim; ++i) r[i] -= dot * u[i];
    }
    residuals.push_back(std::move(r));
  }
  auto directions = orthonormal_span(residuals, dim, tol, false);
  if (directions.size() < count) return {};
  directions.resize(count);
  return directions;
}

std::vector<Vector<GaussQ>> choose_heads(const std::vector<Vector<GaussQ>>& taken,
                                         const std::vector<Vector<GaussQ>>& candidates, std::size_t count,
                                         std::size_t dim, const Tolerance& tol) {
  std::vector<Vector<GaussQ>> span = taken;
  std::size_t base_rank = span.empty() ? 0 : rank_with_tol(MatrixQ::from_columns(dim, span), tol);
  std::vector<Vector<GaussQ>> heads;
  for (const auto& c : candidates) {
    if (heads.size() == count) break;
    span.push_back(c);
    std::size_t r = rank_with_tol(MatrixQ::from_columns(dim, span), tol);
    if (r > base_rank) {
      base_rank = r;
      heads.push_back(c);
    } else {
      span.pop_back();
    }
  }
  if (heads.size() < count) return {};
  return heads;
}

// Builds the chains for one eigenvalue; appends columns to `columns` and returns block sizes.
template <class T>
std::vector<std::size_t> build_chains(const Matrix<T>& x, const T& lambda, std::size_t expected_multiplicity,
                                      const Tolerance& tol, std::vector<Vector<T>>& columns) {
  const std::size_t n = x.rows();
  const Matrix<T> b = shifted(x, lambda);
  auto ranks = power_rank_sequence(x, lambda, tol);
  const std::size_t depth = ranks.size() - 2;  // largest block size
  const std::size_t multiplicity = n - ranks.back();

  std::ostringstream where;
  if constexpr (ScalarTraits<T>::exact) {
    where << lambda;
  } else {
    where << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i";
  }

  if (multiplicity == 0 && expected_multiplicity == 0) {
    throw SpectralError(ErrorKind::invalid_argument, "value " + where.str() + " is not an eigenvalue");
  }
  if (expected_multiplicity != 0 && multiplicity != expected_multiplicity) {
    std::ostringstream os;
    os << "eigenvalue near " << where.str() << ": " << expected_multiplicity
       << " computed eigenvalue(s) clustered but rank test gives multiplicity " << multiplicity
       << "; adjust cluster_eps or rank_eps";
    throw SpectralError(ErrorKind::clustering_ambiguous, os.str());
  }

  // at_least[j] = number of blocks of size >= j
  std::vector<std::size_t> at_least(depth + 2, 0);
  for (std::size_t j = 1; j <= depth; ++j) {
    if (ranks[j - 1] < ranks[j]) throw SpectralError(ErrorKind::chain_construction, "rank sequence increases");
    at_least[j] = ranks[j - 1] - ranks[j];
  }
  std::vector<std::size_t> exactly(depth + 1, 0);
  for (std::size_t j = 1; j <= depth; ++j) {
    if (at_least[j] < at_least[j + 1]) {
      throw SpectralError(ErrorKind::chain_construction,
                          "inconsistent rank sequence at " + where.str() + "; tolerance too loose or too tight");
    }
    exactly[j] = at_least[j] - at_least[j + 1];
  }

  std::vector<Matrix<T>> powers(depth + 1);
  powers[0] = Matrix<T>::identity(n);
  for (std::size_t j = 1; j <= depth; ++j) powers[j] = powers[j - 1] * b;

  struct Head {
    std::size_t size;
    Vector<T> vec;
  };
  std::vector<Head> heads;
  std::vector<std::size_t> sizes;
  for (std::size_t s = depth; s >= 1; --s) {
    if (exactly[s] == 0) continue;
    std::vector<Vector<T>> taken =
        s > 1 ? null_space_basis(powers[s - 1], power_tolerance(tol, x, powers[s - 1], s - 1)) : std::vector<Vector<T>>{};
    for (const auto& h : heads) taken.push_back(mat_vec(powers[h.size - s], h.vec));
    auto candidates = null_space_basis(powers[s], power_tolerance(tol, x, powers[s], s));
    auto chosen = choose_heads(taken, candidates, exactly[s], n, tol);
    if (chosen.size() != exactly[s]) {
      throw SpectralError(ErrorKind::chain_construction,
                          "could not find independent chain heads at " + where.str());
    }
    for (auto& v : chosen) {
      heads.push_back({s, normalize_head(std::move(v))});
      sizes.push_back(s);
    }
  }

  for (const auto& h : heads) {
    for (std::size_t j = 1; j <= h.size; ++j) columns.push_back(mat_vec(powers[h.size - j], h.vec));
  }
  return sizes;
}

template <class T>
JordanSpec<T> decompose_with(const Matrix<T>& x, const std::vector<T>& eigs, const std::vector<std::size_t>& counts,
                             const Tolerance& tol) {
  JordanSpec<T> spec;
  std::vector<Vector<T>> columns;
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    auto sizes = build_chains(x, eigs[k], counts.empty() ? 0 : counts[k], tol, columns);
    spec.groups.push_back({eigs[k], std::move(sizes)});
  }
  if (columns.size() != x.rows()) {
    std::ostringstream os;
    os << "eigenvalues account for " << columns.size() << " of " << x.rows() << " dimensions";
    throw SpectralError(ErrorKind::invalid_argument, os.str());
  }
  spec.transform = Matrix<T>::from_columns(x.rows(), columns);
  return spec;
}

template <class T>
void require_decomposable(const Matrix<T>& x) {
  if (!x.is_square()) throw SpectralError(ErrorKind::dimension_mismatch, "decompose needs a square matrix");
  if (x.rows() == 0) throw SpectralError(ErrorKind::invalid_argument, "0x0 matrices are rejected");
}

}  // namespace

template <class T>
void JordanSpec<T>::validate(const Tolerance& tol) const {
  if (groups.empty()) throw SpectralError(ErrorKind::invalid_argument, "spec has no eigenvalue groups");
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].block_sizes.empty()) throw SpectralError(ErrorKind::invalid_argument, "group without blocks");
    for (auto m : groups[k].block_sizes)
      if (m == 0) throw SpectralError(ErrorKind::invalid_argument, "block sizes must be positive");
    for (std::size_t l = 0; l < k; ++l) {
      if (eigen_equal(groups[k].eigenvalue, groups[l].eigenvalue, tol)) {
        throw SpectralError(ErrorKind::invalid_argument, "eigenvalues of distinct groups coincide");
      }
    }
  }
  if (!transform.is_square() || transform.rows() != dimension()) {
    throw SpectralError(ErrorKind::dimension_mismatch, "transform size does not match total block size");
  }
}

template <class T>
bool JordanSpec<T>::is_canonical() const {
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (k > 0 && !lex_less(groups[k - 1].eigenvalue, groups[k].eigenvalue)) return false;
    if (!std::is_sorted(groups[k].block_sizes.rbegin(), groups[k].block_sizes.rend())) return false;
  }
  return true;
}

template <class T>
JordanSpec<T> canonicalize(const JordanSpec<T>& spec) {
  const std::size_t n = spec.dimension();
  // column offset of every (group, block)
  std::vector<std::vector<std::size_t>> offset(spec.groups.size());
  std::size_t at = 0;
  for (std::size_t k = 0; k < spec.groups.size(); ++k) {
    for (auto m : spec.groups[k].block_sizes) {
      offset[k].push_back(at);
      at += m;
    }
  }
  std::vector<std::size_t> order(spec.groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(spec.groups[a].eigenvalue, spec.groups[b].eigenvalue);
  });
  JordanSpec<T> out;
  std::vector<Vector<T>> columns;
  for (auto k : order) {
    const auto& g = spec.groups[k];
    std::vector<std::size_t> blocks(g.block_sizes.size());
    std::iota(blocks.begin(), blocks.end(), 0);
    std::stable_sort(blocks.begin(), blocks.end(),
                     [&](std::size_t a, std::size_t b) { return g.block_sizes[a] > g.block_sizes[b]; });
    JordanGroup<T> ng{g.eigenvalue, {}};
    for (auto i : blocks) {
      ng.block_sizes.push_back(g.block_sizes[i]);
      for (std::size_t c = 0; c < g.block_sizes[i]; ++c) columns.push_back(spec.transform.column(offset[k][i] + c));
    }
    out.groups.push_back(std::move(ng));
  }
  out.transform = Matrix<T>::from_columns(n, columns);
  return out;
}

template <class T>
Matrix<T> jordan_matrix(const std::vector<JordanGroup<T>>& groups) {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.algebraic();
  Matrix<T> j(n, n);
  std::size_t at = 0;
  for (const auto& g : groups) {
    for (auto m : g.block_sizes) {
      for (std::size_t d = 0; d < m; ++d) {
        j(at + d, at + d) = g.eigenvalue;
        if (d + 1 < m) j(at + d, at + d + 1) = ScalarTraits<T>::one();
      }
      at += m;
    }
  }
  return j;
}

template <class T>
Matrix<T> assemble(const JordanSpec<T>& spec, const Tolerance& tol) {
  spec.validate(tol);
  Matrix<T> inv = inverse(spec.transform, tol);
  return spec.transform * jordan_matrix(spec.groups) * inv;
}

template <class T>
std::vector<std::size_t> power_rank_sequence(const Matrix<T>& x, const T& lambda, const Tolerance& tol) {
  const std::size_t n = x.rows();
  const Matrix<T> b = shifted(x, lambda);
  std::vector<std::size_t> ranks{n};
  Matrix<T> power = Matrix<T>::identity(n);
  while (true) {
    power = power * b;
    ranks.push_back(rank_with_tol(power, power_tolerance(tol, x, power, ranks.size())));
    std::size_t last = ranks.size() - 1;
    if (ranks[last] == ranks[last - 1] || ranks.size() > n + 1) break;
  }
  return ranks;
}

JordanSpec<Complex> decompose(const MatrixF& x, const Tolerance& tol) {
  tol.validate();
  require_decomposable(x);
  auto ev = eigenvalues(x);
  const double scale = std::max(1.0, singular_values(x).front());
  const double radius = tol.cluster_eps * scale;

  // single-linkage clustering
  std::vector<std::size_t> parent(ev.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < ev.size(); ++a)
    for (std::size_t b = a + 1; b < ev.size(); ++b)
      if (std::abs(ev[a] - ev[b]) <= radius) parent[find(a)] = find(b);

  std::vector<std::size_t> roots;
  for (std::size_t a = 0; a < ev.size(); ++a)
    if (find(a) == a) roots.push_back(a);
  struct Cluster {
    Complex center;
    std::size_t count;
  };
  std::vector<Cluster> clusters;
  for (auto r : roots) {
    Complex sum{};
    std::size_t count = 0;
    for (std::size_t a = 0; a < ev.size(); ++a) {
      if (find(a) == r) {
        sum += ev[a];
        ++count;
      }
    }
    clusters.push_back({sum / static_cast<double>(count), count});
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return lex_less(a.center, b.center); });

  std::vector<Complex> centers;
  std::vector<std::size_t> counts;
  for (const auto& c : clusters) {
    centers.push_back(c.center);
    counts.push_back(c.count);
  }
  JordanSpec<Complex> spec = decompose_with(x, centers, counts, tol);

  const double residual = max_abs_diff(assemble(spec, tol), x);
  if (residual > tol.recon_eps * std::max(1.0, max_abs(x))) {
    std::ostringstream os;
    os << "reconstruction residual " << residual << " exceeds recon_eps";
    throw SpectralError(ErrorKind::reconstruction, os.str());
  }
  return spec;
}

JordanSpec<GaussQ> decompose(const MatrixQ& x, std::span<const GaussQ> eigenvalues) {
  require_decomposable(x);
  std::vector<GaussQ> eigs(eigenvalues.begin(), eigenvalues.end());
  std::sort(eigs.begin(), eigs.end(), [](const GaussQ& a, const GaussQ& b) { return lex_less(a, b); });
  for (std::size_t k = 1; k < eigs.size(); ++k) {
    if (eigs[k] == eigs[k - 1]) throw SpectralError(ErrorKind::invalid_argument, "eigenvalues must be distinct");
  }
  return decompose_with(x, eigs, {}, Tolerance{});
}

template <class T>
SpectralFamily<T> extract_family(const JordanSpec<T>& spec, const Tolerance& tol) {
  spec.validate(tol);
  const std::size_t n = spec.dimension();
  const Matrix<T>& u = spec.transform;
  const Matrix<T> uinv = inverse(u, tol);
  SpectralFamily<T> family{n, {}};
  std::size_t at = 0;
  for (std::size_t k = 0; k < spec.groups.size(); ++k) {
    const auto& g = spec.groups[k];
    for (std::size_t i = 0; i < g.block_sizes.size(); ++i) {
      const std::size_t m = g.block_sizes[i];
      Matrix<T> p(n, n);
      Matrix<T> nil(n, n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          T sp = ScalarTraits<T>::zero();
          T sn = ScalarTraits<T>::zero();
          for (std::size_t d = 0; d < m; ++d) {
            sp += u(r, at + d) * uinv(at + d, c);
            if (d + 1 < m) sn += u(r, at + d) * uinv(at + d + 1, c);
          }
          p(r, c) = std::move(sp);
          nil(r, c) = std::move(sn);
        }
      }
      family.items.push_back({g.eigenvalue, k, i, m, std::move(p), std::move(nil)});
      at += m;
    }
  }
  return family;
}

template <class T>
Matrix<T> reconstruct(const SpectralFamily<T>& family) {
  Matrix<T> x(family.dimension, family.dimension);
  for (const auto& it : family.items) {
    x.add_scaled(it.eigenvalue, it.projector);
    x += it.nilpotent;
  }
  return x;
}

template <class T>
FamilyReport verify_family(const SpectralFamily<T>& family, const Tolerance& tol) {
  FamilyReport report;
  const auto& items = family.items;
  const std::size_t n = family.dimension;
  double scale = 1.0;
  for (const auto& it : items) scale = std::max({scale, max_abs(it.projector), max_abs(it.nilpotent)});
  const double eps = ScalarTraits<T>::exact ? 0.0 : tol.recon_eps * scale;
  auto nonzero = [&](const Matrix<T>& m) {
    for (const auto& v : m.entries())
      if (!ScalarTraits<T>::is_zero(v, eps)) return true;
    return false;
  };
  auto flag = [&](FamilyCheck c, std::size_t a, std::size_t b, const Matrix<T>& residual, std::string detail) {
    report.violations.push_back({c, a, b, max_abs(residual), std::move(detail)});
  };

  Matrix<T> sum(n, n);
  for (const auto& it : items) sum += it.projector;
  Matrix<T> completeness = sum - Matrix<T>::identity(n);
  if (nonzero(completeness)) flag(FamilyCheck::completeness, 0, 0, completeness, "sum of projectors != I");

  for (std::size_t a = 0; a < items.size(); ++a) {
    const auto& pa = items[a].projector;
    const auto& na = items[a].nilpotent;
    Matrix<T> idem = pa * pa - pa;
    if (nonzero(idem)) flag(FamilyCheck::idempotence, a, a, idem, "P^2 != P");

    const std::size_t m = items[a].block_size;
    Matrix<T> top = na.pow(static_cast<unsigned>(m));
    if (nonzero(top)) flag(FamilyCheck::nilpotency, a, a, top, "N^m != 0");
    if (m >= 2) {
      Matrix<T> below = na.pow(static_cast<unsigned>(m - 1));
      if (!nonzero(below)) flag(FamilyCheck::nilpotency, a, a, below, "N^(m-1) == 0");
    }

    Matrix<T> pn = pa * na - na;
    Matrix<T> np = na * pa - na;
    if (nonzero(pn)) flag(FamilyCheck::projector_nilpotent, a, a, pn, "P N != N");
    if (nonzero(np)) flag(FamilyCheck::projector_nilpotent, a, a, np, "N P != N");

    for (std::size_t b = 0; b < items.size(); ++b) {
      if (b == a) continue;
      const auto& pb = items[b].projector;
      const auto& nb = items[b].nilpotent;
      Matrix<T> orth = pa * pb;
      if (nonzero(orth)) flag(FamilyCheck::orthogonality, a, b, orth, "P_a P_b != 0");
      Matrix<T> cross = pb * na;
      if (nonzero(cross)) flag(FamilyCheck::projector_nilpotent, b, a, cross, "P_b N_a != 0");
      Matrix<T> cross2 = na * pb;
      if (nonzero(cross2)) flag(FamilyCheck::projector_nilpotent, a, b, cross2, "N_a P_b != 0");
      Matrix<T> nn = na * nb;
      if (nonzero(nn)) flag(FamilyCheck::projector_nilpotent, a, b, nn, "N_a N_b != 0");
    }
  }
  return report;
}

#define SPECTRACALC_INSTANTIATE(T)                                                                  \
  template void JordanSpec<T>::validate(const Tolerance&) const;                                    \
  template bool JordanSpec<T>::is_canonical() const;                                                \
  template JordanSpec<T> canonicalize(const JordanSpec<T>&);                                        \
  template Matrix<T> jordan_matrix(const std::vector<JordanGroup<T>>&);                             \
  template Matrix<T> assemble(const JordanSpec<T>&, const Tolerance&);                              \
  template std::vector<std::size_t> power_rank_sequence(const Matrix<T>&, const T&, const Tolerance&); \
  template SpectralFamily<T> extract_family(const JordanSpec<T>&, const Tolerance&);                \
  template Matrix<T> reconstruct(const SpectralFamily<T>&);                                         \
  template FamilyReport verify_family(const SpectralFamily<T>&, const Tolerance&);

SPECTRACALC_INSTANTIATE(Complex)
SPECTRACALC_INSTANTIATE(GaussQ)

#undef SPECTRACALC_INSTANTIATE

}  // namespace spectracalc
