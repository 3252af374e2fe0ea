#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectracalc {

enum class ErrorKind {
  dimension_mismatch,
  singular,
  clustering_ambiguous,
  chain_construction,
  reconstruction,
  invalid_argument,
  invalid_family,
  structural_mismatch,
  out_of_radius,
  non_convergent,
  cap_exceeded,
  unsupported_mode,
  parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Error raised by every library operation. The kind drives the CLI exit code.
class SpectralError : public std::runtime_error {
 public:
  SpectralError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace spectracalc
