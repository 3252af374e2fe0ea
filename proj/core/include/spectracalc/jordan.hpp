#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spectracalc/linalg.hpp"
#include "spectracalc/matrix.hpp"

namespace spectracalc {

/// One distinct eigenvalue with the sizes of its Jordan blocks.
template <class T>
struct JordanGroup {
  T eigenvalue;
  std::vector<std::size_t> block_sizes;

  /// Algebraic multiplicity: sum of block sizes.
  std::size_t algebraic() const {
    std::size_t s = 0;
    for (auto m : block_sizes) s += m;
    return s;
  }
  /// Geometric multiplicity: number of blocks.
  std::size_t geometric() const { return block_sizes.size(); }

  friend bool operator==(const JordanGroup&, const JordanGroup&) = default;
};

/// X = U (direct sum of J_m(lambda)) U^-1, with blocks laid out in group order.
template <class T>
struct JordanSpec {
  Matrix<T> transform;
  std::vector<JordanGroup<T>> groups;

  std::size_t dimension() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.algebraic();
    return n;
  }

  /// Checks sizes, positivity, distinctness of eigenvalues and that the transform
  /// matches the block dimension. Does not require canonical order.
  void validate(const Tolerance& tol = {}) const;

  /// True when eigenvalues are lexicographically increasing and blocks nonincreasing.
  bool is_canonical() const;
};

/// Reorders groups (lexicographic eigenvalue) and blocks (nonincreasing), permuting
/// the transform's column blocks to match, so assemble() is unchanged.
template <class T>
JordanSpec<T> canonicalize(const JordanSpec<T>& spec);

/// Direct sum of the Jordan blocks, in group order.
template <class T>
Matrix<T> jordan_matrix(const std::vector<JordanGroup<T>>& groups);

template <class T>
Matrix<T> assemble(const JordanSpec<T>& spec, const Tolerance& tol = {});

/// Float decomposition: eigenvalues from a general eigensolver, clustered by single
/// linkage at cluster_eps * max(1, sigma_max(x)); block sizes from the rank sequence
/// of (x - lambda I)^j; chains built top-down from the largest block.
JordanSpec<Complex> decompose(const MatrixF& x, const Tolerance& tol = {});

/// Exact decomposition with caller-supplied distinct eigenvalues; their algebraic
/// multiplicities must account for the whole dimension.
JordanSpec<GaussQ> decompose(const MatrixQ& x, std::span<const GaussQ> eigenvalues);

/// Ranks of (x - lambda I)^j for j = 0, 1, ... until two consecutive ranks agree.
template <class T>
std::vector<std::size_t> power_rank_sequence(const Matrix<T>& x, const T& lambda, const Tolerance& tol = {});

template <class T>
struct FamilyItem {
  T eigenvalue;
  std::size_t group = 0;  // k, 0-based
  std::size_t block = 0;  // i, 0-based within the group
  std::size_t block_size = 1;
  Matrix<T> projector;
  Matrix<T> nilpotent;
};

/// Projector/nilpotent pair for every Jordan block.
template <class T>
struct SpectralFamily {
  std::size_t dimension = 0;
  std::vector<FamilyItem<T>> items;

  std::size_t group_count() const {
    std::size_t k = 0;
    for (const auto& it : items) k = std::max(k, it.group + 1);
    return k;
  }
};

/// P_{k,i} = U I_{k,i} U^-1 and N_{k,i} = U J'_{k,i} U^-1 for each block.
template <class T>
SpectralFamily<T> extract_family(const JordanSpec<T>& spec, const Tolerance& tol = {});

/// sum lambda P + sum N
template <class T>
Matrix<T> reconstruct(const SpectralFamily<T>& family);

enum class FamilyCheck { completeness, idempotence, orthogonality, nilpotency, projector_nilpotent };

std::string_view to_string(FamilyCheck check) noexcept;

struct FamilyViolation {
  FamilyCheck check;
  std::size_t first = 0;   // item index
  std::size_t second = 0;  // item index (same as first for single-item checks)
  double magnitude = 0.0;  // max-norm of the offending residual
  std::string detail;
};

struct FamilyReport {
  std::vector<FamilyViolation> violations;

  bool ok() const { return violations.empty(); }
  bool has(FamilyCheck c) const {
    for (const auto& v : violations)
      if (v.check == c) return true;
    return false;
  }
};

/// Completeness, idempotence, orthogonality, exact nilpotency degree, and the
/// P/N product relations. Float residuals are compared against
/// recon_eps * max(1, largest family entry); exact mode requires exact zeros.
template <class T>
FamilyReport verify_family(const SpectralFamily<T>& family, const Tolerance& tol = {});

inline SpectralFamily<Complex> to_float(const SpectralFamily<GaussQ>& f) {
  SpectralFamily<Complex> out{f.dimension, {}};
  for (const auto& it : f.items) {
    out.items.push_back({it.eigenvalue.to_complex(), it.group, it.block, it.block_size, to_float(it.projector),
                         to_float(it.nilpotent)});
  }
  return out;
}

inline JordanSpec<Complex> to_float(const JordanSpec<GaussQ>& s) {
  JordanSpec<Complex> out{to_float(s.transform), {}};
  for (const auto& g : s.groups) out.groups.push_back({g.eigenvalue.to_complex(), g.block_sizes});
  return out;
}

}  // namespace spectracalc
