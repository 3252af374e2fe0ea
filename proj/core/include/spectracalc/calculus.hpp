#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spectracalc/jordan.hpp"
#include "spectracalc/series.hpp"

namespace spectracalc {

/// Arguments that carry a nilpotent factor, as a bit mask over argument indices:
/// bit l set means argument l contributes N^q (q >= 1) instead of P.
using TermPattern = std::size_t;

/// The 2^r term patterns in summation order: the pure-projector term, then the
/// mixed selections by size ascending and lexicographic index sets, then the
/// pure-nilpotent term.
std::vector<TermPattern> term_patterns(std::size_t arity);

/// Enabled term patterns; the default enables all of them. Disabling patterns
/// evaluates a deliberately incomplete formula, for ablation.
struct TermMask {
  std::vector<bool> enabled;  // indexed by pattern; empty means all enabled

  bool allows(TermPattern p) const { return enabled.empty() || enabled.at(p); }
  static TermMask all_but(std::size_t arity, TermPattern p);
};

/// f(X) = sum f(lambda) P + sum_{q=1}^{m-1} f^(q)(lambda)/q! N^q over all blocks.
template <class T>
Matrix<T> apply_single(const SeriesFunction& f, const SpectralFamily<T>& family, const SeriesOptions& opts = {},
                       const TermMask& mask = {});

/// f(X_1, ..., X_r) over every block tuple and term pattern, with the mixed partial
/// divided by prod q_l! and the factors ordered by argument index.
template <class T>
Matrix<T> apply_multi(const SeriesFunction& f, std::span<const SpectralFamily<T>> families,
                      const SeriesOptions& opts = {}, const TermMask& mask = {});

template <class T>
Matrix<T> apply_two(const SeriesFunction& f, const SpectralFamily<T>& first, const SpectralFamily<T>& second,
                    const SeriesOptions& opts = {}, const TermMask& mask = {});

}  // namespace spectracalc
