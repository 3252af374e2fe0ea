#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spectracalc/jordan.hpp"

namespace spectracalc {

/// Per-eigenvalue block partition, without the eigenvalue itself.
struct SignatureEntry {
  std::size_t algebraic = 0;
  std::vector<std::size_t> partition;  // nonincreasing

  friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
};

/// Canonical structural descriptor of an analogous family. Two specs are analogous
/// (for some ratios) only if their signatures are equal.
struct AnalogySignature {
  std::vector<SignatureEntry> entries;

  friend bool operator==(const AnalogySignature&, const AnalogySignature&) = default;
  std::string to_string() const;
};

/// Group indices of `spec` sorted by (partition ascending, then eigenvalue lexicographic).
template <class T>
std::vector<std::size_t> canonical_group_order(const JordanSpec<T>& spec);

template <class T>
AnalogySignature signature_of(const JordanSpec<T>& spec);

template <class T>
struct GroupMatch {
  std::size_t x_group = 0;
  std::size_t y_group = 0;
  T ratio;  // y eigenvalue = ratio * x eigenvalue, never zero
};

/// Ratios c_k, one per distinct eigenvalue of x, in x's canonical signature order.
template <class T>
struct RatioProfile {
  std::vector<GroupMatch<T>> matches;

  std::vector<T> ratios() const {
    std::vector<T> r;
    for (const auto& m : matches) r.push_back(m.ratio);
    return r;
  }
  /// The common ratio when all c_k agree (to cluster_eps, relatively, in float mode).
  std::optional<T> constant_ratio(const Tolerance& tol = {}) const;
};

template <class T>
struct AnalogyOutcome {
  std::optional<RatioProfile<T>> profile;
  std::string reason;  // why not analogous, when profile is empty

  explicit operator bool() const { return profile.has_value(); }
};

/// Searches for a partition-preserving bijection between eigenvalue groups with
/// nonzero finite ratios. Backtracks over groups sharing identical partitions.
template <class T>
AnalogyOutcome<T> check_analogous(const JordanSpec<T>& x, const JordanSpec<T>& y, const Tolerance& tol = {});

/// True when every match pairs equal partitions and y = c * x holds per group.
template <class T>
bool is_valid_profile(const JordanSpec<T>& x, const JordanSpec<T>& y, const RatioProfile<T>& profile,
                      const Tolerance& tol = {});

/// Profile for y ~ x: swapped groups, ratios 1/c_k.
template <class T>
RatioProfile<T> invert(const RatioProfile<T>& xy);

/// Profile for x ~ z given x ~ y and y ~ z; ratios multiply.
template <class T>
RatioProfile<T> compose(const RatioProfile<T>& xy, const RatioProfile<T>& yz);

enum class PropStatus { pass, fail, not_applicable };

std::string_view to_string(PropStatus status) noexcept;

struct PropCheck {
  std::string name;
  PropStatus status = PropStatus::not_applicable;
  double residual = 0.0;  // relative residual (absolute for rank and commutator)
  std::string detail;
};

struct PropsReport {
  PropCheck rank;         // equal rank
  PropCheck commutation;  // XY = YX when both share one transform
  PropCheck determinant;  // det X * prod c_k^alpha_k = det Y
  PropCheck trace;        // constant c: trace Y = c trace X
  PropCheck char_poly;    // constant c: roots of CP_Y are c times roots of CP_X

  std::vector<const PropCheck*> all() const { return {&rank, &commutation, &determinant, &trace, &char_poly}; }
  bool passed() const {
    for (const auto* c : all())
      if (c->status == PropStatus::fail) return false;
    return true;
  }
};

/// Rank, commutation, determinant, trace and characteristic-polynomial relations
/// between analogous matrices. Float checks pass when the residual is at most
/// recon_eps; exact checks require equality.
template <class T>
PropsReport verify_props(const JordanSpec<T>& x, const JordanSpec<T>& y, const RatioProfile<T>& profile,
                         const Tolerance& tol = {});

}  // namespace spectracalc
