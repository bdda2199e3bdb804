#include "generators.hpp"

#include <algorithm>

namespace lognabla::gen {

namespace {

bool is_integer_difference(const Rational& a, const Rational& b) { return (a - b).denominator() == 1; }

}  // namespace

PadicMatrix unit_matrix(Rng& rng, const PadicContext& ctx, std::size_t n) {
  std::uniform_int_distribution<int> d(-4, 4);
  for (;;) {
    PadicMatrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = PadicScalar::from_int(ctx, d(rng));
    PadicScalar det = characteristic_polynomial(m)[0];
    if (!det.is_zero() && *det.valuation() == 0) return m;
  }
}

SeriesMatrix gauge(Rng& rng, const PadicContext& ctx, std::size_t n, int nvars, int deg, bool identity_constant, int hi) {
  Window w = Window::box(nvars, 0, std::max(deg, hi));
  SeriesMatrix g = SeriesMatrix::from_constant(identity_constant ? PadicMatrix::identity(ctx, n) : unit_matrix(rng, ctx, n), w);
  std::uniform_int_distribution<int> coef(-3, 3), pick(0, 3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for_each_index(Window::box(nvars, 0, deg), [&](const MultiIndex& i) {
        if (total_degree(i, nvars) == 0 || total_degree(i, nvars) > deg || pick(rng) != 0) return;
        g(a, b).add_to(i, PadicScalar::from_int(ctx, coef(rng)));
      });
  return g;
}

std::vector<Rational> nid_exponents(Rng& rng, const PadicContext& ctx, std::size_t k) {
  static const std::int64_t dens[] = {1, 2, 3, 4, 6, 7};
  std::uniform_int_distribution<int> num(-6, 6), den(0, 5);
  std::vector<Rational> out;
  while (out.size() < k) {
    std::int64_t d = dens[den(rng)];
    if (d % ctx.p == 0) continue;
    Rational r(num(rng), d);
    if (std::none_of(out.begin(), out.end(), [&](const Rational& x) { return is_integer_difference(x, r); })) out.push_back(r);
  }
  return out;
}

std::vector<PadicMatrix> commuting_model(Rng& rng, const PadicContext& ctx, std::size_t rank, int nvars) {
  std::uniform_int_distribution<std::size_t> nb(1, rank);
  std::size_t blocks = nb(rng);
  std::vector<std::size_t> sizes(blocks, 1);
  for (std::size_t extra = rank - blocks; extra > 0; --extra) sizes[std::uniform_int_distribution<std::size_t>(0, blocks - 1)(rng)]++;
  PadicMatrix nil(ctx, rank, rank);
  std::size_t off = 0;
  for (std::size_t s : sizes) {
    for (std::size_t i = 0; i + 1 < s; ++i) nil(off + i, off + i + 1) = PadicScalar::from_int(ctx, 1);
    off += s;
  }
  PadicMatrix s = unit_matrix(rng, ctx, rank);
  PadicMatrix sinv = inverse(s);
  std::uniform_int_distribution<int> c(-2, 2);
  std::vector<PadicMatrix> out;
  for (int j = 0; j < nvars; ++j) {
    std::vector<Rational> ex = nid_exponents(rng, ctx, blocks);
    PadicMatrix m = nil * PadicScalar::from_int(ctx, j == 0 ? 1 : c(rng));
    off = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t i = 0; i < sizes[b]; ++i) m(off + i, off + i) = PadicScalar::from_rational(ctx, ex[b]);
      off += sizes[b];
    }
    out.push_back(s * m * sinv);
  }
  return out;
}

}  // namespace lognabla::gen
