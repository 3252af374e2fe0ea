#include "spectracalc/calculus.hpp"

#include <algorithm>
#include <bit>

#include "spectracalc/error.hpp"

namespace spectracalc {

std::vector<TermPattern> term_patterns(std::size_t arity) {
  if (arity == 0 || arity >= 8 * sizeof(TermPattern))
    throw SpectralError(ErrorKind::invalid_argument, "unsupported arity " + std::to_string(arity));
  std::vector<TermPattern> out;
  for (std::size_t k = 0; k <= arity; ++k) {
    std::vector<std::vector<std::size_t>> sets;
    for (TermPattern p = 0; p < (TermPattern{1} << arity); ++p) {
      if (static_cast<std::size_t>(std::popcount(p)) != k) continue;
      std::vector<std::size_t> idx;
      for (std::size_t l = 0; l < arity; ++l)
        if (p >> l & 1U) idx.push_back(l);
      sets.push_back(std::move(idx));
    }
    std::sort(sets.begin(), sets.end());
    for (const auto& idx : sets) {
      TermPattern p = 0;
      for (auto l : idx) p |= TermPattern{1} << l;
      out.push_back(p);
    }
  }
  return out;
}

TermMask TermMask::all_but(std::size_t arity, TermPattern p) {
  TermMask m;
  m.enabled.assign(std::size_t{1} << arity, true);
  m.enabled.at(p) = false;
  return m;
}

namespace {

template <class T>
T partial_as(const SeriesFunction& f, const Exponents& q, const std::vector<T>& z, const SeriesOptions& opts) {
  if constexpr (ScalarTraits<T>::exact) {
    return f.partial_exact(q, z);
  } else {
    return f.partial(q, z, opts);
  }
}

template <class T>
void check_radius(const SeriesFunction& f, const std::vector<T>& z) {
  std::vector<Complex> zf;
  for (const auto& v : z) zf.push_back(ScalarTraits<T>::to_complex(v));
  f.check_radius(zf);
}

template <class T>
T inverse_factorial(std::size_t q) {
  T r = ScalarTraits<T>::one();
  for (std::size_t i = 2; i <= q; ++i) r /= ScalarTraits<T>::from_int(static_cast<long>(i));
  return r;
}

// N^0 .. N^(m-1) for one block; index 0 holds P.
template <class T>
std::vector<Matrix<T>> block_factors(const FamilyItem<T>& item) {
  std::vector<Matrix<T>> out{item.projector};
  if (item.block_size > 1) out.push_back(item.nilpotent);
  for (std::size_t q = 2; q < item.block_size; ++q) out.push_back(out.back() * item.nilpotent);
  return out;
}

}  // namespace

template <class T>
Matrix<T> apply_multi(const SeriesFunction& f, std::span<const SpectralFamily<T>> families, const SeriesOptions& opts,
                      const TermMask& mask) {
  const std::size_t r = families.size();
  if (r != f.arity())
    throw SpectralError(ErrorKind::dimension_mismatch, "function of arity " + std::to_string(f.arity()) +
                                                           " given " + std::to_string(r) + " arguments");
  const std::size_t n = families[0].dimension;
  for (const auto& fam : families) {
    if (fam.dimension != n) throw SpectralError(ErrorKind::dimension_mismatch, "argument dimensions differ");
    if (fam.items.empty()) throw SpectralError(ErrorKind::invalid_family, "empty family");
  }
  if constexpr (ScalarTraits<T>::exact) {
    if (!f.supports_exact())
      throw SpectralError(ErrorKind::unsupported_mode, "exact evaluation needs a sparse series, not " + f.name());
  }
  for (std::size_t l = 0; l < r; ++l) {
    for (const auto& it : families[l].items) {
      std::vector<T> z(r, ScalarTraits<T>::zero());
      z[l] = it.eigenvalue;
      check_radius(f, z);
    }
  }

  std::vector<std::vector<std::vector<Matrix<T>>>> factors(r);
  for (std::size_t l = 0; l < r; ++l)
    for (const auto& it : families[l].items) factors[l].push_back(block_factors(it));

  const auto patterns = term_patterns(r);
  Matrix<T> out(n, n);
  std::vector<std::size_t> pick(r, 0);
  std::vector<T> z(r);
  while (true) {
    for (std::size_t l = 0; l < r; ++l) z[l] = families[l].items[pick[l]].eigenvalue;
    for (TermPattern p : patterns) {
      if (!mask.allows(p)) continue;
      bool possible = true;
      for (std::size_t l = 0; l < r; ++l)
        if ((p >> l & 1U) && families[l].items[pick[l]].block_size < 2) possible = false;
      if (!possible) continue;
      // q_l runs over 1..m_l-1 where the pattern asks for a nilpotent, stays 0 elsewhere.
      std::vector<std::size_t> selected;
      Exponents q(r, 0);
      for (std::size_t l = 0; l < r; ++l) {
        if (p >> l & 1U) {
          selected.push_back(l);
          q[l] = 1;
        }
      }
      while (true) {
        T coeff = partial_as(f, q, z, opts);
        if (!ScalarTraits<T>::is_zero(coeff, 0.0)) {
          for (std::size_t l = 0; l < r; ++l) coeff *= inverse_factorial<T>(q[l]);
          Matrix<T> term = factors[0][pick[0]][q[0]];
          for (std::size_t l = 1; l < r; ++l) term = term * factors[l][pick[l]][q[l]];
          out.add_scaled(coeff, term);
        }
        bool advanced = false;
        for (std::size_t j = selected.size(); j > 0 && !advanced; --j) {
          const std::size_t l = selected[j - 1];
          if (q[l] + 1 < families[l].items[pick[l]].block_size) {
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
    while (l > 0) {
      --l;
      if (++pick[l] < families[l].items.size()) break;
      pick[l] = 0;
      if (l == 0) return out;
    }
  }
}

template <class T>
Matrix<T> apply_single(const SeriesFunction& f, const SpectralFamily<T>& family, const SeriesOptions& opts,
                       const TermMask& mask) {
  return apply_multi<T>(f, std::span<const SpectralFamily<T>>(&family, 1), opts, mask);
}

template <class T>
Matrix<T> apply_two(const SeriesFunction& f, const SpectralFamily<T>& first, const SpectralFamily<T>& second,
                    const SeriesOptions& opts, const TermMask& mask) {
  const std::vector<SpectralFamily<T>> fams{first, second};
  return apply_multi<T>(f, fams, opts, mask);
}

#define SPECTRACALC_INSTANTIATE(T)                                                                              \
  template Matrix<T> apply_single(const SeriesFunction&, const SpectralFamily<T>&, const SeriesOptions&,       \
                                  const TermMask&);                                                            \
  template Matrix<T> apply_multi(const SeriesFunction&, std::span<const SpectralFamily<T>>, const SeriesOptions&, \
                                 const TermMask&);                                                             \
  template Matrix<T> apply_two(const SeriesFunction&, const SpectralFamily<T>&, const SpectralFamily<T>&,      \
                               const SeriesOptions&, const TermMask&);

SPECTRACALC_INSTANTIATE(Complex)
SPECTRACALC_INSTANTIATE(GaussQ)

}  // namespace spectracalc
