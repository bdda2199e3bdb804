#pragma once

#include "lognabla/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace lognabla {

// Prime and relative precision cap shared by every scalar of a computation.
struct PadicContext {
  std::uint32_t p = 5;
  int cap = 20;

  PadicContext() = default;
  PadicContext(std::uint32_t prime, int precision_cap);
  bool operator==(const PadicContext&) const = default;
};

// Element of the value group: p^(-q) for an exact rational q, or zero.
class NormValue {
 public:
  NormValue() : zero_(true) {}
  static NormValue zero() { return NormValue(); }
  static NormValue one() { return from_exponent(Rational(0)); }
  // The value p^(-q).
  static NormValue from_exponent(const Rational& q);

  bool is_zero() const { return zero_; }
  // q with value p^(-q); undefined for zero.
  const Rational& exponent() const;
  // log_p of the value, i.e. -q.
  Rational log() const { return -exponent(); }

  NormValue operator*(const NormValue& o) const;
  NormValue operator/(const NormValue& o) const;
  NormValue pow(const Rational& r) const;
  NormValue root(std::int64_t n) const { return pow(Rational(1, n)); }

  bool operator==(const NormValue& o) const;
  std::strong_ordering operator<=>(const NormValue& o) const;

  std::string to_string(std::uint32_t p) const;

 private:
  bool zero_;
  Rational q_{0};
};

NormValue max(const NormValue& a, const NormValue& b);
NormValue min(const NormValue& a, const NormValue& b);

// Element of Q_p known to a finite absolute precision: p^v * u with u a unit
// known mod p^(prec - v). Relative precision never exceeds the context cap.
//
// Zero comes in two flavors: exact zero (prec = infinity) and a value known to
// be divisible by p^prec. A default-constructed scalar is an exact zero with
// no context; arithmetic adopts the other operand's context.
class PadicScalar {
 public:
  static constexpr std::int64_t kInfinite = std::int64_t{1} << 60;

  PadicScalar() = default;

  static PadicScalar exact_zero(const PadicContext& ctx);
  static PadicScalar zero(const PadicContext& ctx, std::int64_t prec);
  static PadicScalar from_int(const PadicContext& ctx, std::int64_t n);
  static PadicScalar from_rational(const PadicContext& ctx, const Rational& r);
  // unit is reduced mod p^(prec - v); it must be coprime to p unless zero.
  static PadicScalar from_parts(const PadicContext& ctx, std::int64_t v, std::uint64_t unit,
                                std::int64_t prec);

  bool has_context() const { return p_ != 0; }
  PadicContext context() const;
  std::uint32_t prime() const { return p_; }

  bool is_zero() const { return unit_ == 0; }
  bool is_exact_zero() const { return unit_ == 0 && prec_ >= kInfinite; }
  // Exact valuation for nonzero values; nullopt for zero.
  std::optional<std::int64_t> valuation() const;
  // Valuation for nonzero values, absolute precision for zero.
  std::int64_t valuation_lower_bound() const { return unit_ == 0 ? prec_ : val_; }
  std::int64_t precision() const { return prec_; }
  std::int64_t relative_precision() const { return unit_ == 0 ? 0 : prec_ - val_; }
  std::uint64_t unit() const { return unit_; }

  // |x| as an exact norm; zero-at-precision reports the zero norm.
  NormValue norm() const;

  PadicScalar operator-() const;
  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator/(const PadicScalar& o) const;
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
  PadicScalar& operator/=(const PadicScalar& o) { return *this = *this / o; }
  PadicScalar inverse() const;
  PadicScalar pow(std::int64_t k) const;

  // Drop precision to at most the given absolute precision.
  PadicScalar with_precision(std::int64_t prec) const;

  // Equality at the joint tracked precision.
  bool equals(const PadicScalar& o) const { return (*this - o).is_zero(); }
  // Identical representation (same valuation, unit and precision).
  bool identical(const PadicScalar& o) const;

  // For values in Z_p known mod p^k with k <= cap: representative in [0, p^k).
  std::uint64_t residue(int k) const;

  // Rational with small numerator and denominator agreeing with this value at
  // its precision, if one exists.
  std::optional<Rational> to_rational() const;

  std::string to_string() const;

 private:
  PadicScalar(std::uint32_t p, int cap, std::int64_t v, std::uint64_t u, std::int64_t prec)
      : p_(p), cap_(cap), val_(v), unit_(u), prec_(prec) {}
  static PadicScalar normalized(std::uint32_t p, int cap, std::int64_t v, std::uint64_t s,
                                std::int64_t prec);

  std::uint32_t p_ = 0;
  int cap_ = 0;
  std::int64_t val_ = kInfinite;
  std::uint64_t unit_ = 0;
  std::int64_t prec_ = kInfinite;
};

inline PadicScalar operator*(std::int64_t n, const PadicScalar& x) {
  if (!x.has_context()) return x;
  return PadicScalar::from_int(x.context(), n) * x;
}

}  // namespace lognabla
