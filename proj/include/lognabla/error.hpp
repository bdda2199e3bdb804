#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lognabla {

enum class ErrorKind {
  invalid_argument,
  shape_mismatch,
  insufficient_precision,
  division_by_zero,
  indeterminate_root,
  exponent_outside_scope,
  inconsistent_eigenvalues,
  precision_exhausted,
  not_invertible,
  integrability,
  out_of_domain,
  resonance,
  depth_exhausted,
  inconclusive,
  extraction_stalled,
  not_expressible,
  probe_exhaustion,
  internal_consistency,
};

std::string_view to_string(ErrorKind kind);

// Solver-level failure. The kind is the stable, machine-readable name; the
// message carries the human detail (pairs, indices, blocking values).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// True for kinds that indicate malformed input rather than a solver outcome.
bool is_input_error(ErrorKind kind);

}  // namespace lognabla
