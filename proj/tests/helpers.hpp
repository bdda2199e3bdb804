#pragma once

#include "lognabla/padic.hpp"
#include "lognabla/series.hpp"

#include <random>

namespace lognabla::testing {

inline PadicContext ctx5() { return PadicContext(5, 20); }

inline PadicScalar q(const PadicContext& c, std::int64_t num, std::int64_t den = 1) {
  return PadicScalar::from_rational(c, Rational(num, den));
}

inline NormValue pnorm(std::int64_t num, std::int64_t den = 1) {
  // p^(num/den)
  return NormValue::from_exponent(-Rational(num, den));
}

// Legendre: v_p(n!).
inline int legendre(std::int64_t n, std::uint32_t p) {
  int v = 0;
  for (std::int64_t q = p; q <= n; q *= p) v += static_cast<int>(n / q);
  return v;
}

}  // namespace lognabla::testing
