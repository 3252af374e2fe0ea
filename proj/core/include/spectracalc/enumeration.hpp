#pragma once

#include <cstddef>
#include <gmpxx.h>
#include <vector>

namespace spectracalc {

/// Memoized P_k(m) (partitions of m into exactly k parts) and P(m) for m <= max_m.
/// Built once in the constructor; read-only afterwards.
class PartitionTable {
 public:
  explicit PartitionTable(std::size_t max_m);

  std::size_t max_m() const noexcept { return max_m_; }

  /// P_k(m); zero when k > m. P_0(0) = 1.
  const mpz_class& parts(std::size_t m, std::size_t k) const;
  /// P(m) = sum_k P_k(m), with P(0) = 1.
  const mpz_class& total(std::size_t m) const;

 private:
  std::size_t max_m_;
  std::vector<std::vector<mpz_class>> parts_;  // parts_[m][k]
  std::vector<mpz_class> total_;
};

mpz_class partition_k(std::size_t m, std::size_t k);
mpz_class partition_total(std::size_t m);

inline constexpr std::size_t default_family_cap = 200;

/// Number of analogous families of m x m matrices: sum over K of the sum over
/// nonincreasing (alpha_1..alpha_K) with sum m of prod P(alpha_k).
mpz_class family_count(std::size_t m, std::size_t cap = default_family_cap);

/// The K-th inner sum of family_count, for K = 1..m (index 0 unused and zero).
std::vector<mpz_class> family_count_by_groups(std::size_t m, std::size_t cap = default_family_cap);

/// Families counted as unordered multisets of per-eigenvalue partitions, so groups
/// with equal multiplicity but different partitions are not double-counted.
mpz_class family_count_unordered(std::size_t m, std::size_t cap = default_family_cap);

struct AsymptoticEstimate {
  double value;      // may be +inf for large m
  double log_value;  // natural log, always finite
};

/// [exp(pi sqrt(2n/3)) / (4 sqrt(3) n)]^K with n = m / K. K must divide m.
AsymptoticEstimate asymptotic_family_count(std::size_t m, std::size_t groups);

/// P(m / K)^K, the exact count the estimate approximates.
mpz_class equal_split_family_count(std::size_t m, std::size_t groups);

}  // namespace spectracalc
