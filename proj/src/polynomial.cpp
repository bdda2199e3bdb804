#include "lognabla/polynomial.hpp"

#include "lognabla/error.hpp"

#include <algorithm>
#include <functional>

namespace lognabla {

PadicPolynomial::PadicPolynomial(const PadicContext& ctx, std::vector<PadicScalar> coeffs)
    : ctx_(ctx), c_(std::move(coeffs)) {
  trim();
}

PadicPolynomial PadicPolynomial::constant(const PadicContext& ctx, const PadicScalar& c) {
  return PadicPolynomial(ctx, {c});
}

PadicPolynomial PadicPolynomial::linear_root(const PadicContext& ctx, const PadicScalar& root) {
  return PadicPolynomial(ctx, {-root, PadicScalar::from_int(ctx, 1)});
}

PadicPolynomial PadicPolynomial::from_rationals(const PadicContext& ctx, const std::vector<Rational>& coeffs) {
  std::vector<PadicScalar> c;
  for (const auto& r : coeffs) c.push_back(PadicScalar::from_rational(ctx, r));
  return PadicPolynomial(ctx, c);
}

void PadicPolynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

PadicScalar PadicPolynomial::leading() const {
  if (c_.empty()) return PadicScalar::exact_zero(ctx_);
  return c_.back();
}

PadicScalar PadicPolynomial::operator()(const PadicScalar& x) const {
  PadicScalar r = PadicScalar::exact_zero(ctx_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

PadicMatrix PadicPolynomial::operator()(const PadicMatrix& x) const {
  PadicMatrix r = PadicMatrix::zero(ctx_, x.rows(), x.cols());
  PadicMatrix id = PadicMatrix::identity(ctx_, x.rows());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + id * (*it);
  return r;
}

PadicPolynomial PadicPolynomial::derivative() const {
  std::vector<PadicScalar> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(static_cast<std::int64_t>(i) * c_[i]);
  return PadicPolynomial(ctx_, d);
}

PadicPolynomial PadicPolynomial::operator+(const PadicPolynomial& o) const {
  std::vector<PadicScalar> r(std::max(c_.size(), o.c_.size()), PadicScalar::exact_zero(ctx_));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return PadicPolynomial(ctx_, r);
}

PadicPolynomial PadicPolynomial::operator-(const PadicPolynomial& o) const {
  return *this + o * PadicScalar::from_int(ctx_, -1);
}

PadicPolynomial PadicPolynomial::operator*(const PadicPolynomial& o) const {
  if (c_.empty() || o.c_.empty()) return PadicPolynomial(ctx_, {});
  std::vector<PadicScalar> r(c_.size() + o.c_.size() - 1, PadicScalar::exact_zero(ctx_));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return PadicPolynomial(ctx_, r);
}

PadicPolynomial PadicPolynomial::operator*(const PadicScalar& c) const {
  std::vector<PadicScalar> r = c_;
  for (auto& x : r) x *= c;
  return PadicPolynomial(ctx_, r);
}

PadicPolynomial PadicPolynomial::pow(int k) const {
  PadicPolynomial r = constant(ctx_, PadicScalar::from_int(ctx_, 1));
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

PadicPolynomial PadicPolynomial::monic() const {
  if (c_.empty()) throw Error(ErrorKind::invalid_argument, "monic of the zero polynomial");
  return *this * leading().inverse();
}

PadicPolynomial PadicPolynomial::primitive() const {
  if (c_.empty()) return *this;
  std::int64_t vmin = PadicScalar::kInfinite;
  for (const auto& x : c_)
    if (auto v = x.valuation()) vmin = std::min(vmin, *v);
  if (vmin == 0) return *this;
  PadicScalar s = PadicScalar::from_int(ctx_, static_cast<std::int64_t>(ctx_.p)).pow(-vmin);
  return *this * s;
}

void PadicPolynomial::divmod(const PadicPolynomial& d, PadicPolynomial& q, PadicPolynomial& r) const {
  if (d.is_zero()) throw Error(ErrorKind::division_by_zero, "polynomial division by zero");
  std::vector<PadicScalar> rem = c_;
  int dd = d.degree();
  std::vector<PadicScalar> quot(std::max<int>(0, degree() - dd + 1), PadicScalar::exact_zero(ctx_));
  PadicScalar lead_inv = d.leading().inverse();
  for (int k = degree() - dd; k >= 0; --k) {
    PadicScalar f = rem[k + dd] * lead_inv;
    quot[k] = f;
    for (int j = 0; j <= dd; ++j) rem[k + j] -= f * d.c_[j];
  }
  rem.resize(std::max(0, dd));
  q = PadicPolynomial(ctx_, quot);
  r = PadicPolynomial(ctx_, rem);
}

PadicPolynomial PadicPolynomial::exact_div(const PadicPolynomial& d) const {
  PadicPolynomial q, r;
  divmod(d, q, r);
  if (!r.is_zero()) throw Error(ErrorKind::precision_exhausted, "inexact polynomial division");
  return q;
}

PadicPolynomial gcd(const PadicPolynomial& a, const PadicPolynomial& b) {
  PadicPolynomial x = a, y = b;
  while (!y.is_zero()) {
    PadicPolynomial q, r;
    x.divmod(y, q, r);
    x = y;
    y = r;
  }
  if (x.is_zero()) return x;
  return x.monic();
}

std::vector<SquarefreeFactor> squarefree_decomposition(const PadicPolynomial& f) {
  std::vector<SquarefreeFactor> out;
  if (f.degree() < 1) return out;
  const PadicContext& ctx = f.context();
  PadicPolynomial fm = f.monic();
  PadicPolynomial df = fm.derivative();
  PadicPolynomial a = gcd(fm, df);
  PadicPolynomial b = fm.exact_div(a);
  PadicPolynomial c = df.exact_div(a);
  PadicPolynomial d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    PadicPolynomial g = d.is_zero() ? b : gcd(b, d);
    if (g.degree() > 0) out.push_back({g, i});
    PadicPolynomial nb = b.exact_div(g);
    c = d.is_zero() ? PadicPolynomial(ctx, {}) : d.exact_div(g);
    d = c - nb.derivative();
    b = nb;
    if (i > f.degree()) throw Error(ErrorKind::precision_exhausted, "squarefree decomposition did not terminate");
  }
  return out;
}

PadicPolynomial characteristic_polynomial(const PadicMatrix& a) {
  if (!a.square()) throw Error(ErrorKind::shape_mismatch, "characteristic polynomial of a non-square matrix");
  const PadicContext& ctx = a.context();
  std::size_t n = a.rows();
  PadicScalar one = PadicScalar::from_int(ctx, 1);
  if (n == 0) return PadicPolynomial::constant(ctx, one);
  // poly holds coefficients from the leading one down.
  std::vector<PadicScalar> poly = {one, -a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    PadicMatrix ar = a.block(0, 0, r, r);
    PadicMatrix row = a.block(r, 0, 1, r);
    PadicMatrix col = a.block(0, r, r, 1);
    std::vector<PadicScalar> items = {one, -a(r, r)};
    PadicMatrix v = col;
    for (std::size_t k = 0; k < r; ++k) {
      items.push_back(-(row * v)(0, 0));
      v = ar * v;
    }
    std::vector<PadicScalar> next(r + 2, PadicScalar::exact_zero(ctx));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += items[i - j] * poly[j];
    poly = std::move(next);
  }
  std::reverse(poly.begin(), poly.end());
  return PadicPolynomial(ctx, poly);
}

int RootReport::found_degree() const {
  int d = 0;
  for (const auto& r : roots) d += r.multiplicity;
  return d;
}

namespace {

// Newton iteration on integer lifts, so rounding in one step is corrected by
// the next. The returned precision is what f's precision supports: N - v(f').
PadicScalar newton(const PadicPolynomial& f, const PadicPolynomial& df, std::int64_t start) {
  const PadicContext& ctx = f.context();
  std::uint64_t lift = static_cast<std::uint64_t>(start);
  for (int it = 0; it < 128; ++it) {
    // The lift is only meaningful modulo p^cap.
    PadicScalar x = PadicScalar::from_int(ctx, static_cast<std::int64_t>(lift)).with_precision(ctx.cap);
    PadicScalar fx = f(x), dx = df(x);
    if (fx.is_zero()) {
      std::int64_t prec = std::min<std::int64_t>(ctx.cap, fx.precision() - *dx.valuation());
      return x.with_precision(std::max<std::int64_t>(prec, 1));
    }
    PadicScalar next = x - fx / dx;
    int k = static_cast<int>(std::min<std::int64_t>(ctx.cap, next.precision()));
    if (k <= 0) break;
    lift = next.residue(k);
  }
  throw Error(ErrorKind::precision_exhausted, "Newton iteration did not converge");
}

// Roots in Z_p of a squarefree polynomial with integral coefficients.
void search_roots(const PadicPolynomial& f, int search_depth, std::vector<PadicScalar>& roots,
                  std::vector<IndeterminateRoot>& indeterminate) {
  const PadicContext& ctx = f.context();
  PadicPolynomial df = f.derivative();
  const std::int64_t p = ctx.p;
  std::function<void(std::int64_t, int)> recurse = [&](std::int64_t a, int k) {
    std::int64_t pk = static_cast<std::int64_t>(ipow(ctx.p, k));
    for (std::int64_t d = 0; d < p; ++d) {
      PadicScalar c = PadicScalar::from_int(ctx, a + d * pk);
      PadicScalar fc = f(c);
      std::int64_t fv = fc.valuation_lower_bound();
      if (fv < k + 1) continue;
      PadicScalar dc = df(c);
      std::int64_t dv = dc.valuation_lower_bound();
      // Hensel: a unique root with v(x - c) = v(f(c)) - v(f'(c)); it lies in
      // this class only if that distance is at least k + 1. When f(c) is zero
      // at precision the distance is only bounded below.
      bool separated = !dc.is_zero() && dv <= k && fv > 2 * dv;
      if (separated && fv - dv >= k + 1) {
        roots.push_back(newton(f, df, a + d * pk));
      } else if (separated && !fc.is_zero()) {
        continue;
      } else if (k + 1 < search_depth && k + 1 < ctx.cap) {
        recurse(a + d * pk, k + 1);
      } else {
        indeterminate.push_back({c, k + 1});
      }
    }
  };
  recurse(0, 0);
}

}  // namespace

RootReport hensel_roots_zp(const PadicPolynomial& f, int search_depth) {
  if (f.is_zero()) throw Error(ErrorKind::invalid_argument, "roots of the zero polynomial");
  if (f.leading().valuation().value_or(1) != 0)
    throw Error(ErrorKind::invalid_argument, "leading coefficient must be a unit");
  RootReport rep;
  PadicPolynomial base = f.primitive();
  std::vector<SquarefreeFactor> factors;
  if (gcd(f, f.derivative()).degree() == 0)
    factors.push_back({f.monic(), 1});
  else
    factors = squarefree_decomposition(f);
  for (const auto& sf : factors) {
    std::vector<PadicScalar> roots;
    search_roots(sf.factor.primitive(), search_depth, roots, rep.indeterminate);
    // The gcd chain costs precision; a root of multiplicity m is simple for
    // the (m-1)-th derivative of f, so polish it there.
    PadicPolynomial g = base;
    for (int k = 1; k < sf.multiplicity; ++k) g = g.derivative();
    PadicPolynomial dg = g.derivative();
    for (auto& r : roots) {
      PadicScalar best = r;
      try {
        int k = static_cast<int>(std::min<std::int64_t>(r.precision(), f.context().cap));
        PadicScalar polished = newton(g, dg, static_cast<std::int64_t>(r.residue(k)));
        if (polished.precision() > r.precision() && polished.with_precision(r.precision()).equals(r)) best = polished;
      } catch (const Error&) {
      }
      rep.roots.push_back({best, sf.multiplicity});
    }
  }
  return rep;
}

}  // namespace lognabla
