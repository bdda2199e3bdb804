#include "lognabla/padic.hpp"

#include "lognabla/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lognabla {

namespace {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorKind::internal_consistency, "unit not invertible");
  i128 res = old_s % static_cast<i128>(m);
  if (res < 0) res += static_cast<i128>(m);
  return static_cast<std::uint64_t>(res);
}

std::uint64_t reduce_signed(std::int64_t n, std::uint64_t m) {
  i128 r = static_cast<i128>(n) % static_cast<i128>(m);
  if (r < 0) r += static_cast<i128>(m);
  return static_cast<std::uint64_t>(r);
}

void require_same_prime(std::uint32_t a, std::uint32_t b) {
  if (a != b) throw Error(ErrorKind::invalid_argument, "mixed primes in arithmetic");
}

}  // namespace

PadicContext::PadicContext(std::uint32_t prime, int precision_cap) : p(prime), cap(precision_cap) {
  if (!is_prime(prime)) throw Error(ErrorKind::invalid_argument, "p = " + std::to_string(prime) + " is not prime");
  if (precision_cap < 1) throw Error(ErrorKind::invalid_argument, "precision cap must be positive");
  if (precision_cap > max_exponent(prime))
    throw Error(ErrorKind::invalid_argument, "p^cap must stay below 2^62 (cap <= " +
                                                 std::to_string(max_exponent(prime)) + ")");
}

// ---------------------------------------------------------------- NormValue

NormValue NormValue::from_exponent(const Rational& q) {
  NormValue n;
  n.zero_ = false;
  n.q_ = q;
  return n;
}

const Rational& NormValue::exponent() const {
  if (zero_) throw Error(ErrorKind::invalid_argument, "exponent of the zero norm");
  return q_;
}

NormValue NormValue::operator*(const NormValue& o) const {
  if (zero_ || o.zero_) return zero();
  return from_exponent(q_ + o.q_);
}

NormValue NormValue::operator/(const NormValue& o) const {
  if (o.zero_) throw Error(ErrorKind::division_by_zero, "norm division by zero");
  if (zero_) return zero();
  return from_exponent(q_ - o.q_);
}

NormValue NormValue::pow(const Rational& r) const {
  if (zero_) {
    if (r > 0) return zero();
    if (r == 0) return one();
    throw Error(ErrorKind::division_by_zero, "negative power of the zero norm");
  }
  return from_exponent(q_ * r);
}

bool NormValue::operator==(const NormValue& o) const {
  if (zero_ || o.zero_) return zero_ == o.zero_;
  return q_ == o.q_;
}

std::strong_ordering NormValue::operator<=>(const NormValue& o) const {
  if (zero_ && o.zero_) return std::strong_ordering::equal;
  if (zero_) return std::strong_ordering::less;
  if (o.zero_) return std::strong_ordering::greater;
  if (q_ == o.q_) return std::strong_ordering::equal;
  return q_ > o.q_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string NormValue::to_string(std::uint32_t p) const {
  if (zero_) return "0";
  if (q_ == 0) return "1";
  return std::to_string(p) + "^(" + lognabla::to_string(-q_) + ")";
}

NormValue max(const NormValue& a, const NormValue& b) { return a < b ? b : a; }
NormValue min(const NormValue& a, const NormValue& b) { return a < b ? a : b; }

// -------------------------------------------------------------- PadicScalar

PadicScalar PadicScalar::exact_zero(const PadicContext& ctx) {
  return PadicScalar(ctx.p, ctx.cap, kInfinite, 0, kInfinite);
}

PadicScalar PadicScalar::zero(const PadicContext& ctx, std::int64_t prec) {
  if (prec >= kInfinite) return exact_zero(ctx);
  return PadicScalar(ctx.p, ctx.cap, prec, 0, prec);
}

PadicScalar PadicScalar::from_int(const PadicContext& ctx, std::int64_t n) {
  if (n == 0) return exact_zero(ctx);
  int v = lognabla::valuation(n, ctx.p);
  std::int64_t m = n;
  for (int i = 0; i < v; ++i) m /= static_cast<std::int64_t>(ctx.p);
  std::uint64_t M = ipow(ctx.p, ctx.cap);
  return PadicScalar(ctx.p, ctx.cap, v, reduce_signed(m, M), v + ctx.cap);
}

PadicScalar PadicScalar::from_rational(const PadicContext& ctx, const Rational& r) {
  if (r.numerator() == 0) return exact_zero(ctx);
  std::int64_t num = r.numerator(), den = r.denominator();
  int vn = lognabla::valuation(num, ctx.p), vd = lognabla::valuation(den, ctx.p);
  for (int i = 0; i < vn; ++i) num /= static_cast<std::int64_t>(ctx.p);
  for (int i = 0; i < vd; ++i) den /= static_cast<std::int64_t>(ctx.p);
  std::uint64_t M = ipow(ctx.p, ctx.cap);
  std::uint64_t u = mulmod(reduce_signed(num, M), invmod(reduce_signed(den, M), M), M);
  std::int64_t v = vn - vd;
  return PadicScalar(ctx.p, ctx.cap, v, u, v + ctx.cap);
}

PadicScalar PadicScalar::from_parts(const PadicContext& ctx, std::int64_t v, std::uint64_t unit,
                                    std::int64_t prec) {
  if (prec >= kInfinite) {
    if (unit != 0) throw Error(ErrorKind::invalid_argument, "nonzero scalar with infinite precision");
    return exact_zero(ctx);
  }
  if (unit == 0) return zero(ctx, prec);
  if (unit % ctx.p == 0) throw Error(ErrorKind::invalid_argument, "unit part divisible by p");
  std::int64_t rel = prec - v;
  if (rel <= 0) throw Error(ErrorKind::invalid_argument, "precision below valuation for a nonzero scalar");
  if (rel > ctx.cap) throw Error(ErrorKind::invalid_argument, "relative precision exceeds the cap");
  std::uint64_t M = ipow(ctx.p, static_cast<int>(rel));
  return PadicScalar(ctx.p, ctx.cap, v, unit % M, prec);
}

PadicScalar PadicScalar::normalized(std::uint32_t p, int cap, std::int64_t v, std::uint64_t s,
                                    std::int64_t prec) {
  if (s == 0) return PadicScalar(p, cap, prec, 0, prec);
  while (s % p == 0) {
    s /= p;
    ++v;
  }
  return PadicScalar(p, cap, v, s, prec);
}

PadicContext PadicScalar::context() const {
  if (p_ == 0) throw Error(ErrorKind::invalid_argument, "scalar without context");
  PadicContext c;
  c.p = p_;
  c.cap = cap_;
  return c;
}

std::optional<std::int64_t> PadicScalar::valuation() const {
  if (unit_ == 0) return std::nullopt;
  return val_;
}

NormValue PadicScalar::norm() const {
  if (unit_ == 0) return NormValue::zero();
  return NormValue::from_exponent(Rational(val_));
}

PadicScalar PadicScalar::with_precision(std::int64_t prec) const {
  if (prec >= prec_) return *this;
  if (unit_ == 0 || prec <= val_) return PadicScalar(p_, cap_, prec, 0, prec);
  std::uint64_t M = ipow(p_, static_cast<int>(prec - val_));
  return PadicScalar(p_, cap_, val_, unit_ % M, prec);
}

PadicScalar PadicScalar::operator-() const {
  if (unit_ == 0) return *this;
  std::uint64_t M = ipow(p_, static_cast<int>(prec_ - val_));
  return PadicScalar(p_, cap_, val_, M - unit_, prec_);
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  if (p_ == 0) return o;
  if (o.p_ == 0) return *this;
  require_same_prime(p_, o.p_);
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  std::int64_t prec = std::min(prec_, o.prec_);
  if (unit_ == 0) return o.with_precision(prec);
  if (o.unit_ == 0) return with_precision(prec);
  std::int64_t vmin = std::min(val_, o.val_);
  if (prec <= vmin) return PadicScalar(p_, cap_, prec, 0, prec);
  int rel = static_cast<int>(prec - vmin);
  std::uint64_t M = ipow(p_, rel);
  auto shifted = [&](const PadicScalar& x) -> std::uint64_t {
    std::int64_t d = x.val_ - vmin;
    if (d >= rel) return 0;
    return mulmod(x.unit_ % M, ipow(p_, static_cast<int>(d)), M);
  };
  std::uint64_t s = shifted(*this) + shifted(o);
  if (s >= M) s -= M;
  return normalized(p_, std::max(cap_, o.cap_), vmin, s, prec);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  if (p_ == 0) return *this;
  if (o.p_ == 0) return o;
  require_same_prime(p_, o.p_);
  if (is_exact_zero()) return *this;
  if (o.is_exact_zero()) return o;
  if (unit_ == 0 && o.unit_ == 0) {
    std::int64_t prec = prec_ + o.prec_;
    return PadicScalar(p_, cap_, prec, 0, prec);
  }
  if (unit_ == 0) return PadicScalar(p_, cap_, prec_ + o.val_, 0, prec_ + o.val_);
  if (o.unit_ == 0) return PadicScalar(p_, cap_, o.prec_ + val_, 0, o.prec_ + val_);
  int rel = static_cast<int>(std::min(prec_ - val_, o.prec_ - o.val_));
  std::uint64_t M = ipow(p_, rel);
  std::uint64_t u = mulmod(unit_ % M, o.unit_ % M, M);
  std::int64_t v = val_ + o.val_;
  return PadicScalar(p_, cap_, v, u, v + rel);
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const {
  if (o.p_ == 0 || o.is_exact_zero()) throw Error(ErrorKind::division_by_zero, "divisor is exact zero");
  if (o.unit_ == 0)
    throw Error(ErrorKind::insufficient_precision,
                "divisor is zero modulo " + std::to_string(o.p_) + "^" + std::to_string(o.prec_));
  if (p_ == 0) return *this;
  require_same_prime(p_, o.p_);
  if (is_exact_zero()) return *this;
  if (unit_ == 0) return PadicScalar(p_, cap_, prec_ - o.val_, 0, prec_ - o.val_);
  int rel = static_cast<int>(std::min(prec_ - val_, o.prec_ - o.val_));
  std::uint64_t M = ipow(p_, rel);
  std::uint64_t u = mulmod(unit_ % M, invmod(o.unit_ % M, M), M);
  std::int64_t v = val_ - o.val_;
  return PadicScalar(p_, cap_, v, u, v + rel);
}

PadicScalar PadicScalar::inverse() const {
  if (p_ == 0) throw Error(ErrorKind::division_by_zero, "inverse of exact zero");
  return from_int(context(), 1) / *this;
}

PadicScalar PadicScalar::pow(std::int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  if (p_ == 0) {
    if (k == 0) throw Error(ErrorKind::invalid_argument, "power of a context-free zero");
    return *this;
  }
  PadicScalar result = from_int(context(), 1), base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

bool PadicScalar::identical(const PadicScalar& o) const {
  if (is_exact_zero() && o.is_exact_zero()) return true;
  return p_ == o.p_ && val_ == o.val_ && unit_ == o.unit_ && prec_ == o.prec_;
}

std::uint64_t PadicScalar::residue(int k) const {
  if (k < 0 || (p_ != 0 && k > cap_)) throw Error(ErrorKind::invalid_argument, "residue level out of range");
  if (p_ == 0 || is_exact_zero()) return 0;
  if (prec_ < k) throw Error(ErrorKind::insufficient_precision, "residue needs more digits than are known");
  if (unit_ == 0) return 0;
  if (val_ < 0) throw Error(ErrorKind::out_of_domain, "residue of a non-integral scalar");
  if (val_ >= k) return 0;
  std::uint64_t M = ipow(p_, k);
  return mulmod(unit_ % M, ipow(p_, static_cast<int>(val_)), M);
}

std::optional<Rational> PadicScalar::to_rational() const {
  if (unit_ == 0) return Rational(0);
  int rel = static_cast<int>(prec_ - val_);
  std::uint64_t M = ipow(p_, rel);
  // Small-height reconstruction: both parts bounded by M^(1/3) so that a
  // random unit almost never reconstructs by accident.
  i128 bound = static_cast<i128>(std::cbrt(static_cast<long double>(M)));
  i128 r0 = M, r1 = unit_, s0 = 0, s1 = 1;
  while (r1 > bound) {
    i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (s1 == 0) return std::nullopt;
  i128 sa = s1 < 0 ? -s1 : s1;
  if (sa > bound) return std::nullopt;
  if (s1 < 0) {
    r1 = -r1;
    s1 = -s1;
  }
  if (std::gcd(static_cast<std::int64_t>(r1 < 0 ? -r1 : r1), static_cast<std::int64_t>(s1)) != 1) return std::nullopt;
  Rational r(static_cast<std::int64_t>(r1), static_cast<std::int64_t>(s1));
  if (val_ > 0) {
    if (val_ > 30) return std::nullopt;
    r *= Rational(static_cast<std::int64_t>(ipow(p_, static_cast<int>(val_))));
  } else if (val_ < 0) {
    if (-val_ > 30) return std::nullopt;
    r /= Rational(static_cast<std::int64_t>(ipow(p_, static_cast<int>(-val_))));
  }
  if (!from_rational(context(), r).equals(*this)) return std::nullopt;
  return r;
}

std::string PadicScalar::to_string() const {
  if (p_ == 0 || is_exact_zero()) return "0";
  std::string tail = " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  if (unit_ == 0) return "O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  if (auto r = to_rational()) return lognabla::to_string(*r) + tail;
  std::string head = std::to_string(unit_);
  if (val_ != 0) head = std::to_string(p_) + "^" + std::to_string(val_) + "*" + head;
  return head + tail;
}

}  // namespace lognabla
