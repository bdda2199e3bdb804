#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace boost {
// Boost 1.74's mixed integer equality recurses under C++20 rewritten
// comparisons; exact-match overloads take precedence.
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == static_cast<std::int64_t>(b); }
}  // namespace boost

namespace lognabla {

using Rational = boost::rational<std::int64_t>;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

// Valuation of a nonzero integer.
int valuation(std::int64_t n, std::uint32_t p);
// Valuation of a nonzero rational.
int valuation(const Rational& r, std::uint32_t p);

bool is_integer(const Rational& r);
std::int64_t floor(const Rational& r);
std::int64_t ceil(const Rational& r);

// p^k as an unsigned integer; throws when it does not fit in 62 bits.
std::uint64_t ipow(std::uint32_t p, int k);
// Largest k with p^k < 2^62.
int max_exponent(std::uint32_t p);
bool is_prime(std::uint32_t p);

// Smallest k >= 0 with p^k >= n (n >= 1).
int ceil_log(std::uint32_t p, std::int64_t n);

}  // namespace lognabla
