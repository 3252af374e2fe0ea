#include "spectracalc/enumeration.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spectracalc/error.hpp"

namespace spectracalc {

PartitionTable::PartitionTable(std::size_t max_m) : max_m_(max_m), parts_(max_m + 1), total_(max_m + 1) {
  for (std::size_t m = 0; m <= max_m; ++m) {
    parts_[m].assign(m + 1, mpz_class(0));
    if (m == 0) {
      parts_[0][0] = 1;
    } else {
      // P_k(m) = P_k(m - k) + P_{k-1}(m - 1)
      for (std::size_t k = 1; k <= m; ++k) {
        mpz_class v = parts_[m - 1][k - 1];
        if (m - k >= k) v += parts_[m - k][k];
        parts_[m][k] = v;
      }
    }
    mpz_class sum = 0;
    for (const auto& v : parts_[m]) sum += v;
    total_[m] = sum;
  }
}

const mpz_class& PartitionTable::parts(std::size_t m, std::size_t k) const {
  static const mpz_class zero = 0;
  if (m > max_m_) throw SpectralError(ErrorKind::invalid_argument, "m beyond partition table");
  return k > m ? zero : parts_[m][k];
}

const mpz_class& PartitionTable::total(std::size_t m) const {
  if (m > max_m_) throw SpectralError(ErrorKind::invalid_argument, "m beyond partition table");
  return total_[m];
}

mpz_class partition_k(std::size_t m, std::size_t k) { return PartitionTable(m).parts(m, k); }

mpz_class partition_total(std::size_t m) { return PartitionTable(m).total(m); }

namespace {

void check_cap(std::size_t m, std::size_t cap) {
  if (m == 0) throw SpectralError(ErrorKind::invalid_argument, "family counts need m >= 1");
  if (m > cap) {
    throw SpectralError(ErrorKind::cap_exceeded, "m = " + std::to_string(m) + " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

std::vector<mpz_class> family_count_by_groups(std::size_t m, std::size_t cap) {
  check_cap(m, cap);
  const PartitionTable table(m);
  // dp[K][n]: sum over multisets of K parts from {1..j} summing to n of prod P(part)
  std::vector<std::vector<mpz_class>> dp(m + 1, std::vector<mpz_class>(m + 1, mpz_class(0)));
  dp[0][0] = 1;
  for (std::size_t j = 1; j <= m; ++j) {
    const mpz_class& weight = table.total(j);
    for (std::size_t n = j; n <= m; ++n) {
      for (std::size_t k = 1; k <= n; ++k) {
        if (sgn(dp[k - 1][n - j]) != 0) dp[k][n] += weight * dp[k - 1][n - j];
      }
    }
  }
  std::vector<mpz_class> out(m + 1, mpz_class(0));
  for (std::size_t k = 1; k <= m; ++k) out[k] = dp[k][m];
  return out;
}

mpz_class family_count(std::size_t m, std::size_t cap) {
  mpz_class sum = 0;
  for (const auto& v : family_count_by_groups(m, cap)) sum += v;
  return sum;
}

mpz_class family_count_unordered(std::size_t m, std::size_t cap) {
  check_cap(m, cap);
  const PartitionTable table(m);
  // Euler transform: prod_j (1 - x^j)^(-P(j))
  std::vector<mpz_class> dp(m + 1, mpz_class(0));
  dp[0] = 1;
  for (std::size_t j = 1; j <= m; ++j) {
    const mpz_class& kinds = table.total(j);
    std::vector<mpz_class> next = dp;
    for (std::size_t n = j; n <= m; ++n) {
      for (std::size_t c = 1; c * j <= n; ++c) {
        mpz_class choose;
        mpz_class top = kinds + c - 1;
        mpz_bin_ui(choose.get_mpz_t(), top.get_mpz_t(), c);
        next[n] += choose * dp[n - c * j];
      }
    }
    dp = std::move(next);
  }
  return dp[m];
}

AsymptoticEstimate asymptotic_family_count(std::size_t m, std::size_t groups) {
  if (m == 0 || groups == 0) throw SpectralError(ErrorKind::invalid_argument, "m and K must be positive");
  if (m % groups != 0) throw SpectralError(ErrorKind::invalid_argument, "K must divide m");
  const double n = static_cast<double>(m / groups);
  const double k = static_cast<double>(groups);
  const double log_factor = std::numbers::pi * std::sqrt(2.0 * n / 3.0) - std::log(4.0 * std::sqrt(3.0) * n);
  const double log_value = k * log_factor;
  return {std::exp(log_value), log_value};
}

mpz_class equal_split_family_count(std::size_t m, std::size_t groups) {
  if (m == 0 || groups == 0 || m % groups != 0) {
    throw SpectralError(ErrorKind::invalid_argument, "K must be positive and divide m");
  }
  mpz_class out;
  mpz_class base = partition_total(m / groups);
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), groups);
  return out;
}

}  // namespace spectracalc
