#include "lognabla/rational.hpp"

#include "lognabla/error.hpp"

#include <cstdlib>

namespace lognabla {

namespace {

std::int64_t parse_int(const std::string& s) {
  if (s.empty()) throw Error(ErrorKind::invalid_argument, "empty integer");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, "bad integer '" + s + "'");
  }
  if (pos != s.size()) throw Error(ErrorKind::invalid_argument, "bad integer '" + s + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  std::int64_t num = parse_int(text.substr(0, slash));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::invalid_argument, "zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int valuation(std::int64_t n, std::uint32_t p) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "valuation of zero");
  int v = 0;
  while (n % static_cast<std::int64_t>(p) == 0) {
    n /= static_cast<std::int64_t>(p);
    ++v;
  }
  return v;
}

int valuation(const Rational& r, std::uint32_t p) {
  return valuation(r.numerator(), p) - valuation(r.denominator(), p);
}

bool is_integer(const Rational& r) { return r.denominator() == 1; }

std::int64_t floor(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t ceil(const Rational& r) { return -floor(-r); }

std::uint64_t ipow(std::uint32_t p, int k) {
  if (k < 0) throw Error(ErrorKind::invalid_argument, "negative exponent");
  std::uint64_t r = 1;
  const std::uint64_t limit = std::uint64_t{1} << 62;
  for (int i = 0; i < k; ++i) {
    if (r > limit / p) throw Error(ErrorKind::invalid_argument, "prime power exceeds 62 bits");
    r *= p;
  }
  return r;
}

int max_exponent(std::uint32_t p) {
  const std::uint64_t limit = std::uint64_t{1} << 62;
  int k = 0;
  std::uint64_t r = 1;
  while (r <= (limit - 1) / p) {
    r *= p;
    ++k;
  }
  return k;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

int ceil_log(std::uint32_t p, std::int64_t n) {
  int k = 0;
  std::int64_t r = 1;
  while (r < n) {
    r *= p;
    ++k;
  }
  return k;
}

}  // namespace lognabla
