#include "oracles.hpp"

#include "lognabla/matrix.hpp"

#include <bit>
#include <cstdlib>

namespace lognabla::oracle {

std::int64_t legendre(std::int64_t n, std::uint32_t p) {
  std::int64_t v = 0;
  for (std::int64_t q = p; q <= n; q *= p) v += n / q;
  return v;
}

SeriesMatrix fuchs_defect(const LogNablaModule& e, const SeriesMatrix& m, const PadicMatrix& n0) {
  const SeriesMatrix n0s = SeriesMatrix::from_constant(n0, Window::exact(e.nvars()));
  return e.matrix(0) * m + m.log_derivative(0) - m * n0s;
}

std::vector<PadicScalar> exp_minus_coefficients(const PadicContext& ctx, int order) {
  std::vector<PadicScalar> c{PadicScalar::from_int(ctx, 1)};
  for (int i = 1; i <= order; ++i) c.push_back(-c.back() / PadicScalar::from_int(ctx, i));
  return c;
}

std::size_t twisted_kernel_dimension(const PadicContext& ctx, const Rational& delta, int lo, int hi) {
  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  PadicMatrix a = PadicMatrix::zero(ctx, n, n);
  for (int k = lo; k <= hi; ++k) {
    const auto i = static_cast<std::size_t>(k - lo);
    a(i, i) = PadicScalar::from_rational(ctx, Rational(k) + delta);
  }
  return n - rank(a);
}

std::size_t eigenspace_dimension(const std::vector<PadicMatrix>& w, const std::vector<PadicScalar>& xi) {
  const std::size_t mu = w.at(0).rows();
  const PadicContext& ctx = w[0].context();
  PadicMatrix stacked(ctx, 0, mu);
  for (std::size_t j = 0; j < w.size(); ++j)
    stacked = PadicMatrix::vconcat(stacked, w[j] - PadicMatrix::scalar(ctx, mu, xi[j]));
  return mu - rank(stacked);
}

std::array<std::size_t, 2> commutant_ext(const PadicMatrix& we, const PadicMatrix& wf) {
  const std::size_t re = we.rows(), rf = wf.rows(), dim = re * rf;
  const PadicContext& ctx = we.context();
  // Column (a, b) of the map is L(E_ab) = Wf E_ab - E_ab We, flattened row-major.
  PadicMatrix l = PadicMatrix::zero(ctx, dim, dim);
  for (std::size_t a = 0; a < rf; ++a)
    for (std::size_t b = 0; b < re; ++b) {
      PadicMatrix e = PadicMatrix::zero(ctx, rf, re);
      e(a, b) = PadicScalar::from_int(ctx, 1);
      const PadicMatrix img = wf * e - e * we;
      for (std::size_t r = 0; r < rf; ++r)
        for (std::size_t c = 0; c < re; ++c) l(r * re + c, a * re + b) = img(r, c);
    }
  const std::size_t rk = rank(l);
  return {dim - rk, dim - rk};
}

namespace {

LogForm oracle_d(const LogDeRhamComplex& cx, const LogForm& f) {
  const int n = cx.nvars();
  LogForm out(cx.context(), n, cx.rank());
  for (const auto& [key, v] : f.terms()) {
    for (int l = 0; l < n; ++l) {
      const WedgeMask bit = WedgeMask{1} << l;
      if (key.wedge & bit) continue;
      const int below = std::popcount(static_cast<unsigned>(key.wedge & (bit - 1)));
      const PadicMatrix op = cx.operators()[static_cast<std::size_t>(l)] +
                             PadicMatrix::scalar(cx.context(), cx.rank(), PadicScalar::from_int(cx.context(), key.index[static_cast<std::size_t>(l)]));
      PadicMatrix img = op * v;
      if (below % 2) img = -img;
      out.add(FormKey{key.index, static_cast<WedgeMask>(key.wedge | bit)}, img);
    }
  }
  return out;
}

LogForm oracle_gh(const LogForm& f) {
  LogForm out(f.context(), f.nvars(), f.rank());
  for (const auto& [key, v] : f.terms()) {
    bool zero = true;
    for (int j = 0; j < f.nvars(); ++j) zero = zero && key.index[static_cast<std::size_t>(j)] == 0;
    if (zero) out.add(key, v);
  }
  return out;
}

}  // namespace

std::size_t homotopy_failures(const LogDeRhamComplex& cx, int bound, std::size_t* checked) {
  const int n = cx.nvars();
  std::size_t failures = 0, count = 0;
  for_each_index(cx.window(), [&](const MultiIndex& i) {
    int size = 0;
    for (int j = 0; j < n; ++j) size += std::abs(i[static_cast<std::size_t>(j)]);
    if (size > bound) return;
    for (WedgeMask m = 0; m < (WedgeMask{1} << n); ++m)
      for (std::size_t b = 0; b < cx.rank(); ++b) {
        PadicMatrix e = PadicMatrix::zero(cx.context(), cx.rank(), 1);
        e(b, 0) = PadicScalar::from_int(cx.context(), 1);
        const LogForm w = LogForm::monomial(cx.context(), n, cx.rank(), i, m, e);
        ++count;
        const LogForm dw = oracle_d(cx, w);
        const bool d_agrees = (dw - cx.d(w)).is_zero();
        const LogForm lhs = cx.phi(dw) + oracle_d(cx, cx.phi(w));
        if (!d_agrees || !(lhs - (w - oracle_gh(w))).is_zero()) ++failures;
      }
  });
  if (checked) *checked = count;
  return failures;
}

namespace {

std::size_t span_rank(const SeriesMatrix& s) {
  const Window w = s.window();
  PadicMatrix f(s.context(), 0, s.cols());
  for (const auto& j : s.support())
    if (w.determined(j)) f = PadicMatrix::vconcat(f, s.coefficient(j));
  return rank(f);
}

}  // namespace

bool same_span(const SeriesMatrix& a, const SeriesMatrix& b) {
  SeriesMatrix ab(a.context(), a.rows(), a.cols() + b.cols(), a.window());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) ab(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) ab(r, a.cols() + c) = b(r, c);
  }
  const std::size_t k = span_rank(ab);
  return k == span_rank(a) && k == span_rank(b);
}

bool horizontal(const LogNablaModule& e, const SeriesMatrix& v, const std::vector<PadicScalar>& xi) {
  for (int j = 0; j < e.nvars(); ++j)
    if (!(e.apply(j, v) - v * xi[static_cast<std::size_t>(j)]).is_zero()) return false;
  return true;
}

}  // namespace lognabla::oracle
