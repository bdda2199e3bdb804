#pragma once

#include "lognabla/logconn.hpp"

#include <optional>
#include <vector>

namespace lognabla {

// Estimates of |D^n|_rho for n = 1..n_max; entry n - 1 holds order n.
struct SpectralEstimate {
  NormValue radius;
  int n_max = 0;
  std::int64_t probe_window = 0;  // monomials t^k with |k| <= probe_window
  std::size_t probes = 0;
  std::vector<NormValue> norms;
  std::vector<NormValue> roots;  // norms[n-1]^(1/n), exact
  // Sup of the roots over n in [n_max/2, n_max] and the matching inf.
  NormValue tail_upper;
  NormValue tail_lower;
  // Bound on |D|_rho from the matrix norm; absent when N is not exact.
  std::optional<NormValue> upper_root;
  // The estimates equal the operator norm on the probe span (diagonal action).
  bool exact_on_window = false;
};

// Default probe window: n_max plus two powers of p beyond n_max.
std::int64_t default_probe_window(std::uint32_t p, int n_max);

// d/dt on the ring of the annulus through monomial probes.
SpectralEstimate derivation_spectral_norm(std::uint32_t p, const NormValue& rho, int n_max,
                                          std::int64_t k_window = -1);

// d/dt + N(t)/t on a univariate module, through probes t^k e_b.
SpectralEstimate module_spectral_norm(const LogNablaModule& e, const NormValue& rho, int n_max,
                                      std::int64_t probe_window = -1);

struct RobbaVerdict {
  NormValue radius;
  SpectralEstimate module;
  SpectralEstimate reference;
  // Largest |log_p(module root) - log_p(reference root)| over the tail;
  // absent when some module root vanishes.
  std::optional<Rational> max_gap;
  bool consistent = false;
};

struct RobbaReport {
  int n_max = 0;
  Rational tolerance{0};  // allowed gap in log_p
  std::vector<RobbaVerdict> verdicts;
  bool robba_consistent = false;
};

// tolerance <= 0 selects 1 / (2 n_max).
RobbaReport robba_check(const LogNablaModule& e, const std::vector<NormValue>& radii, int n_max,
                        const Rational& tolerance = Rational(0), std::int64_t probe_window = -1);

}  // namespace lognabla
