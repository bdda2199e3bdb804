#pragma once

#include <cstdint>
#include <vector>

namespace lognabla {

// p-adic expansion known to a finite depth: digits[k] for k < depth.
// terminates = every digit at or beyond depth is zero.
struct DigitStream {
  std::uint32_t p = 2;
  std::vector<std::uint8_t> digits;
  std::vector<std::int64_t> nonzero;  // sorted positions with a nonzero digit
  bool terminates = false;

  std::int64_t depth() const { return static_cast<std::int64_t>(digits.size()); }
  static DigitStream from_digits(std::uint32_t p, std::vector<std::uint8_t> digits, bool terminates);
  static DigitStream from_positions(std::uint32_t p, const std::vector<std::int64_t>& positions, std::int64_t depth);
  // Expansion of u/w in Z_p (w prime to p).
  static DigitStream from_rational(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t depth);
  DigitStream operator-(const DigitStream& o) const;
  DigitStream operator-() const;
  bool operator==(const DigitStream& o) const;
};

// Sentinels in valuation scans.
inline constexpr std::int64_t kScanSkip = -1;       // s equals the target
inline constexpr std::int64_t kScanExhausted = -2;  // digits ran out before deciding

// v_p(u - w s) for s in [s_lo, s_hi].
std::vector<std::int64_t> rational_scan_serial(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t s_lo, std::int64_t s_hi);
std::vector<std::int64_t> rational_scan_omp(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t s_lo, std::int64_t s_hi);

// v_p(a - s) for s in [s_lo, s_hi].
std::vector<std::int64_t> stream_scan_serial(const DigitStream& a, std::int64_t s_lo, std::int64_t s_hi);
std::vector<std::int64_t> stream_scan_omp(const DigitStream& a, std::int64_t s_lo, std::int64_t s_hi);

// For n = 0..n_max: min over k in [-K, K] of the sum of v_p(w m + u) over
// m = k-n+1..k, i.e. the valuation of the shifted falling factorial
// (k + x)(k - 1 + x)...(k - n + 1 + x) with x = u/w. Windows containing a
// vanishing factor are skipped; -1 when every window is skipped.
std::vector<std::int64_t> falling_min_serial(std::uint32_t p, std::int64_t u, std::int64_t w, int n_max, std::int64_t k_window);
std::vector<std::int64_t> falling_min_omp(std::uint32_t p, std::int64_t u, std::int64_t w, int n_max, std::int64_t k_window);

}  // namespace lognabla
