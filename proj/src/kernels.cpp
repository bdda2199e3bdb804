#include "lognabla/kernels.hpp"

#include "lognabla/error.hpp"

#include <algorithm>
#include <limits>

namespace lognabla {

namespace {

std::int64_t val_i64(std::int64_t x, std::uint32_t p) {
  std::int64_t v = 0;
  while (x % static_cast<std::int64_t>(p) == 0) {
    x /= static_cast<std::int64_t>(p);
    ++v;
  }
  return v;
}

std::int64_t rational_entry(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t s) {
  std::int64_t d = u - w * s;
  return d == 0 ? kScanSkip : val_i64(d, p);
}

std::int64_t stream_entry(const DigitStream& a, std::int64_t s) {
  // First position where the digits of a and s differ.
  std::int64_t k = 0;
  std::int64_t r = s;
  const std::int64_t p = a.p;
  while (r > 0) {
    if (k >= a.depth()) return kScanExhausted;
    if (a.digits[static_cast<std::size_t>(k)] != r % p) return k;
    r /= p;
    ++k;
  }
  auto it = std::lower_bound(a.nonzero.begin(), a.nonzero.end(), k);
  if (it != a.nonzero.end()) return *it;
  return a.terminates ? kScanSkip : kScanExhausted;
}

void check_range(std::int64_t s_lo, std::int64_t s_hi) {
  if (s_lo < 0 || s_hi < s_lo) throw Error(ErrorKind::invalid_argument, "scan range must satisfy 0 <= lo <= hi");
}

// Valuations v_p(w m + u) for m in [m_lo, m_hi]; -1 marks a vanishing factor.
std::vector<std::int64_t> factor_valuations(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t m_lo, std::int64_t m_hi) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(m_hi - m_lo + 1));
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    std::int64_t x = w * m + u;
    v[static_cast<std::size_t>(m - m_lo)] = x == 0 ? -1 : val_i64(x, p);
  }
  return v;
}

std::int64_t falling_entry(const std::vector<std::int64_t>& pre, const std::vector<std::int64_t>& zeros, std::int64_t m_lo, int n,
                           std::int64_t k_window) {
  std::int64_t best = -1;
  for (std::int64_t k = -k_window; k <= k_window; ++k) {
    // factors m = k-n+1 .. k, prefix index m - m_lo.
    std::size_t hi = static_cast<std::size_t>(k - m_lo + 1), lo = static_cast<std::size_t>(k - n + 1 - m_lo);
    if (zeros[hi] - zeros[lo] > 0) continue;
    std::int64_t s = pre[hi] - pre[lo];
    if (best < 0 || s < best) best = s;
  }
  return best;
}

struct FallingTables {
  std::int64_t m_lo;
  std::vector<std::int64_t> pre, zeros;
};

FallingTables falling_tables(std::uint32_t p, std::int64_t u, std::int64_t w, int n_max, std::int64_t k_window) {
  if (n_max < 0 || k_window < 0) throw Error(ErrorKind::invalid_argument, "falling factorial ranges must be nonnegative");
  FallingTables t;
  t.m_lo = -k_window - n_max;
  auto v = factor_valuations(p, u, w, t.m_lo, k_window);
  t.pre.assign(v.size() + 1, 0);
  t.zeros.assign(v.size() + 1, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    t.pre[i + 1] = t.pre[i] + std::max<std::int64_t>(v[i], 0);
    t.zeros[i + 1] = t.zeros[i] + (v[i] < 0 ? 1 : 0);
  }
  return t;
}

}  // namespace

DigitStream DigitStream::from_digits(std::uint32_t p, std::vector<std::uint8_t> digits, bool terminates) {
  DigitStream d;
  d.p = p;
  d.digits = std::move(digits);
  d.terminates = terminates;
  for (std::size_t k = 0; k < d.digits.size(); ++k) {
    if (d.digits[k] >= p) throw Error(ErrorKind::invalid_argument, "digit out of range");
    if (d.digits[k] != 0) d.nonzero.push_back(static_cast<std::int64_t>(k));
  }
  return d;
}

DigitStream DigitStream::from_positions(std::uint32_t p, const std::vector<std::int64_t>& positions, std::int64_t depth) {
  if (depth < 1) throw Error(ErrorKind::invalid_argument, "stream depth must be positive");
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(depth), 0);
  for (auto k : positions) {
    if (k < 0) throw Error(ErrorKind::invalid_argument, "negative digit position");
    if (k < depth) digits[static_cast<std::size_t>(k)] = 1;
  }
  return from_digits(p, std::move(digits), false);
}

DigitStream DigitStream::from_rational(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t depth) {
  if (w == 0 || w % static_cast<std::int64_t>(p) == 0) throw Error(ErrorKind::invalid_argument, "denominator must be prime to p");
  const std::int64_t pp = p;
  std::int64_t winv = 1;
  for (std::int64_t x = 1; x < pp; ++x)
    if (((w % pp + pp) % pp) * x % pp == 1) winv = x;
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(depth));
  for (std::int64_t k = 0; k < depth; ++k) {
    std::int64_t d = ((u % pp + pp) % pp) * winv % pp;
    digits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(d);
    u = (u - d * w) / pp;
  }
  // Nonnegative integers have finite expansions.
  return from_digits(p, std::move(digits), u == 0);
}

DigitStream DigitStream::operator-(const DigitStream& o) const {
  if (p != o.p) throw Error(ErrorKind::invalid_argument, "digit streams over different primes");
  std::size_t n = std::min(digits.size(), o.digits.size());
  std::vector<std::uint8_t> out(n);
  int borrow = 0;
  for (std::size_t k = 0; k < n; ++k) {
    int d = static_cast<int>(digits[k]) - static_cast<int>(o.digits[k]) - borrow;
    borrow = d < 0 ? 1 : 0;
    out[k] = static_cast<std::uint8_t>(d + borrow * static_cast<int>(p));
  }
  bool term = terminates && o.terminates && digits.size() == o.digits.size() && borrow == 0;
  return from_digits(p, std::move(out), term);
}

DigitStream DigitStream::operator-() const {
  DigitStream zero = from_digits(p, std::vector<std::uint8_t>(digits.size(), 0), true);
  return zero - *this;
}

bool DigitStream::operator==(const DigitStream& o) const { return p == o.p && digits == o.digits && terminates == o.terminates; }

std::vector<std::int64_t> rational_scan_serial(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t s_lo, std::int64_t s_hi) {
  check_range(s_lo, s_hi);
  std::vector<std::int64_t> out(static_cast<std::size_t>(s_hi - s_lo + 1));
  for (std::int64_t s = s_lo; s <= s_hi; ++s) out[static_cast<std::size_t>(s - s_lo)] = rational_entry(p, u, w, s);
  return out;
}

std::vector<std::int64_t> rational_scan_omp(std::uint32_t p, std::int64_t u, std::int64_t w, std::int64_t s_lo, std::int64_t s_hi) {
  check_range(s_lo, s_hi);
  std::vector<std::int64_t> out(static_cast<std::size_t>(s_hi - s_lo + 1));
#pragma omp parallel for schedule(static)
  for (std::int64_t s = s_lo; s <= s_hi; ++s) out[static_cast<std::size_t>(s - s_lo)] = rational_entry(p, u, w, s);
  return out;
}

std::vector<std::int64_t> stream_scan_serial(const DigitStream& a, std::int64_t s_lo, std::int64_t s_hi) {
  check_range(s_lo, s_hi);
  std::vector<std::int64_t> out(static_cast<std::size_t>(s_hi - s_lo + 1));
  for (std::int64_t s = s_lo; s <= s_hi; ++s) out[static_cast<std::size_t>(s - s_lo)] = stream_entry(a, s);
  return out;
}

std::vector<std::int64_t> stream_scan_omp(const DigitStream& a, std::int64_t s_lo, std::int64_t s_hi) {
  check_range(s_lo, s_hi);
  std::vector<std::int64_t> out(static_cast<std::size_t>(s_hi - s_lo + 1));
#pragma omp parallel for schedule(static)
  for (std::int64_t s = s_lo; s <= s_hi; ++s) out[static_cast<std::size_t>(s - s_lo)] = stream_entry(a, s);
  return out;
}

std::vector<std::int64_t> falling_min_serial(std::uint32_t p, std::int64_t u, std::int64_t w, int n_max, std::int64_t k_window) {
  FallingTables t = falling_tables(p, u, w, n_max, k_window);
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = falling_entry(t.pre, t.zeros, t.m_lo, n, k_window);
  return out;
}

std::vector<std::int64_t> falling_min_omp(std::uint32_t p, std::int64_t u, std::int64_t w, int n_max, std::int64_t k_window) {
  FallingTables t = falling_tables(p, u, w, n_max, k_window);
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_max + 1));
#pragma omp parallel for schedule(dynamic)
  for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = falling_entry(t.pre, t.zeros, t.m_lo, n, k_window);
  return out;
}

}  // namespace lognabla
