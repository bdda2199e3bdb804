#include "doctest.h"
#include "generators.hpp"
#include "helpers.hpp"

#include "lognabla/error.hpp"
#include "lognabla/projector.hpp"

using namespace lognabla;
using lognabla::testing::ctx5;
using lognabla::testing::legendre;
using lognabla::testing::q;

namespace {

std::vector<AlignedInterval> discs(int n) { return std::vector<AlignedInterval>(n, AlignedInterval::disc(NormValue::one())); }

PadicMatrix rat(const PadicContext& c, std::vector<std::vector<Rational>> rows) { return PadicMatrix::from_rationals(c, rows); }

std::int64_t v5(std::int64_t n) {
  std::int64_t v = 0;
  while (n % 5 == 0) {
    n /= 5;
    ++v;
  }
  return v;
}

// Rank of the span of the columns of s, read off the coefficients on the window.
std::size_t span_rank(const SeriesMatrix& s) {
  Window w = s.window();
  PadicMatrix f(s.context(), 0, s.cols());
  for (const auto& j : s.support())
    if (w.determined(j)) f = PadicMatrix::vconcat(f, s.coefficient(j));
  return rank(f);
}

bool same_span(const SeriesMatrix& a, const SeriesMatrix& b) {
  SeriesMatrix ab(a.context(), a.rows(), a.cols() + b.cols(), a.window());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) ab(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) ab(r, a.cols() + c) = b(r, c);
  }
  std::size_t k = span_rank(ab);
  return k == span_rank(a) && k == span_rank(b);
}

bool horizontal(const LogNablaModule& e, const SeriesMatrix& s, const std::vector<PadicScalar>& xi) {
  for (int i = 0; i < e.nvars(); ++i)
    if (!(e.apply(i, s) - s * xi[static_cast<std::size_t>(i)]).is_zero()) return false;
  return true;
}

ExponentRow row(const PadicContext& c, std::vector<Rational> xi) {
  ExponentRow r;
  for (const auto& x : xi) {
    r.xi.push_back(PadicScalar::from_rational(c, x));
    r.multiplicity.push_back(1);
  }
  return r;
}

// Joint eigenspace of commuting matrices.
std::size_t eigenspace_dimension(const std::vector<PadicMatrix>& w, const std::vector<PadicScalar>& xi) {
  const auto& c = w.front().context();
  PadicMatrix stacked(c, 0, w.front().cols());
  for (std::size_t j = 0; j < w.size(); ++j)
    stacked = PadicMatrix::vconcat(stacked, w[j] - PadicMatrix::scalar(c, w[j].rows(), xi[j]));
  return kernel(stacked).cols();
}

LogNablaModule extension(const PadicContext& c, const Rational& xi, const Rational& xi2, const Window& w) {
  SeriesMatrix n(c, 2, 2, w);
  n(0, 0) = LaurentSeries::constant(c, w, PadicScalar::from_rational(c, xi));
  n(0, 1) = LaurentSeries::monomial(c, w, MultiIndex{1, 0, 0}, PadicScalar::from_int(c, 1));
  n(1, 1) = LaurentSeries::constant(c, w, PadicScalar::from_rational(c, xi2));
  return LogNablaModule(c, 2, discs(1), w, {n});
}

}  // namespace

TEST_CASE("D_l operator forms") {
  auto c = ctx5();
  DlOperator id = build_dl({row(c, {Rational(1, 2)})}, {q(c, 1, 2)}, QChoice::one, 0);
  CHECK(id.univariate().equals(PadicPolynomial::constant(c, q(c, 1))));

  const PadicScalar xi = q(c, 1, 3);
  DlOperator d = build_dl({row(c, {Rational(1, 3)})}, {xi}, QChoice::one, 6);
  PadicPolynomial x = PadicPolynomial::linear_root(c, xi);
  PadicPolynomial expect = PadicPolynomial::constant(c, q(c, 1));
  for (int j = 1; j <= 6; ++j) {
    PadicPolynomial jj = PadicPolynomial::constant(c, q(c, j));
    expect = expect * ((jj - x) * (jj + x) * q(c, 1, j * j));
  }
  CHECK(d.univariate().equals(expect));

  Window w = Window::box(1, 0, 6);
  auto m = make_m_xi(c, {xi}, discs(1), w);
  SeriesMatrix v = SeriesMatrix::identity(c, 1, w);
  CHECK(d.apply(m, v).equals(v));

  // Incremental form matches the polynomial on a non-horizontal section.
  SeriesMatrix probe(c, 1, 1, w);
  probe(0, 0) = LaurentSeries::monomial(c, w, MultiIndex{2, 0, 0}, q(c, 1));
  PadicScalar value = expect(xi + q(c, 2));
  CHECK(d.apply(m, probe).equals(probe * value));

  try {
    build_dl({row(c, {0, 3})}, {q(c, 0)}, QChoice::one, 5);
    FAIL("expected resonance");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::resonance);
    CHECK(err.detail().find("j 3") != std::string::npos);
  }
  CHECK_NOTHROW(build_dl({row(c, {0, 3})}, {q(c, 0)}, QChoice::one, 2));
}

TEST_CASE("horizontal sections examples") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 5);
  auto m = make_m_xi(c, {q(c, 1, 2)}, discs(1), w);
  HorizontalSpace h = horizontal_sections(m, {q(c, 1, 2)});
  CHECK(h.dimension == 1);
  CHECK(h.sections.equals(SeriesMatrix::identity(c, 1, w)));
  CHECK(h.eta_report.verdict == Verdict::pass);
  CHECK(h.run >= 5);

  auto diag = u_functor(c, {rat(c, {{0, 0}, {0, 1}})}, discs(1), w);
  // Integer exponent difference on the disc is resonant only through the table.
  ExponentRow r0 = row(c, {0});
  ExponentRow r2 = row(c, {Rational(1, 2)});
  auto half = u_functor(c, {rat(c, {{0, 0}, {0, Rational(1, 2)}})}, discs(1), w);
  HorizontalSpace h0 = horizontal_sections(half, {q(c, 0)});
  REQUIRE(h0.dimension == 1);
  SeriesMatrix e1(c, 2, 1, w);
  e1(0, 0) = LaurentSeries::constant(c, w, q(c, 1));
  CHECK(h0.sections.equals(e1));
  CHECK_THROWS_AS(horizontal_sections(diag, {q(c, 0)}, HorizontalOptions{.l_max = 8}), Error);

  HorizontalSpace none = horizontal_sections(half, {q(c, 1, 3)});
  CHECK(none.dimension == 0);
  (void)r0;
  (void)r2;
}

TEST_CASE("horizontal sections of diag(0,1) with a short window") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 0);
  auto diag = u_functor(c, {rat(c, {{0, 0}, {0, 1}})}, discs(1), w);
  HorizontalOptions opt;
  opt.l_max = 0;
  opt.run = 1;
  CHECK_THROWS_AS(horizontal_sections(diag, {q(c, 0)}, opt), Error);
}

TEST_CASE("gauge-scrambled sections match the construct-then-invert oracle") {
  auto c = ctx5();
  gen::Rng rng(11);
  Window w = Window::box(1, 0, 4);
  for (int trial = 0; trial < 4; ++trial) {
    auto xs = gen::nid_exponents(rng, c, 3);
    PadicMatrix s = gen::unit_matrix(rng, c, 3);
    PadicMatrix d = PadicMatrix::zero(c, 3, 3);
    for (int k = 0; k < 3; ++k) d(k, k) = PadicScalar::from_rational(c, xs[k]);
    PadicMatrix wm = s * d * inverse(s);
    SeriesMatrix g = gen::gauge(rng, c, 3, 1, 2, false, 4);
    auto e = gauge_transform(u_functor(c, {wm}, discs(1), w), g.inverse());
    PadicScalar xi = PadicScalar::from_rational(c, xs[0]);
    HorizontalSpace h = horizontal_sections(e, {xi});
    REQUIRE(h.dimension == 1);
    SeriesMatrix oracle = g * SeriesMatrix::from_constant(s.column(0), Window::exact(1));
    CHECK(horizontal(e, oracle, {xi}));
    CHECK(same_span(h.sections, oracle));
  }
}

TEST_CASE("H0 dimension, idempotence and Q choices on random models") {
  // Two passes of D_l need room for twice the per-pass loss.
  PadicContext c(5, 26);
  gen::Rng rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    int nvars = 1 + trial % 2;
    std::size_t rank = nvars == 1 ? 3 : 2;
    int k = nvars == 1 ? 3 : 1;
    Window w = Window::box(nvars, 0, k);
    auto model = gen::commuting_model(rng, c, rank, nvars);
    SeriesMatrix g = gen::gauge(rng, c, rank, nvars, 2, false, k);
    auto e = gauge_transform(u_functor(c, model, discs(nvars), w), g.inverse());
    auto table = exponent_table(e);
    std::vector<PadicScalar> xi;
    for (const auto& r : table) xi.push_back(r.xi.front());
    std::size_t oracle = eigenspace_dimension(model, xi);
    HorizontalSpace h = horizontal_sections(e, xi);
    INFO("trial " << trial << " loss " << h.precision_loss);
    CHECK(h.dimension == oracle);
    CHECK(horizontal(e, h.sections, xi));
    CHECK(h.eta_report.verdict == Verdict::pass);

    HorizontalOptions again;
    again.probes = h.sections;
    HorizontalSpace h2 = horizontal_sections(e, xi, again);
    CHECK(h2.sections.equals(h.sections));

    HorizontalOptions kq;
    kq.q = QChoice::kernel;
    HorizontalSpace hk = horizontal_sections(e, xi, kq);
    CHECK(hk.dimension <= h.dimension);
    CHECK(horizontal(e, hk.sections, xi));
  }
}

TEST_CASE("Jordan block has one horizontal direction") {
  auto c = ctx5();
  gen::Rng rng(3);
  Window w = Window::box(1, 0, 4);
  PadicMatrix j = rat(c, {{Rational(1, 3), 1}, {0, Rational(1, 3)}});
  SeriesMatrix g = gen::gauge(rng, c, 2, 1, 2, false, 4);
  auto e = gauge_transform(u_functor(c, {j}, discs(1), w), g.inverse());
  HorizontalSpace h = horizontal_sections(e, {q(c, 1, 3)});
  CHECK(h.dimension == 1);
  CHECK(horizontal(e, h.sections, {q(c, 1, 3)}));
}

TEST_CASE("horizontal sections on an annulus") {
  auto c = ctx5();
  Window w = Window::box(1, -3, 3);
  std::vector<AlignedInterval> ann{AlignedInterval::annulus(testing::pnorm(-1), NormValue::one())};
  auto m = make_m_xi(c, {q(c, 1, 2)}, ann, w);
  HorizontalSpace h = horizontal_sections(m, {q(c, 1, 2)});
  CHECK(h.dimension == 1);
  CHECK_THROWS_AS(horizontal_sections(m, {q(c, 3, 2)}), Error);
  CHECK(horizontal_sections(m, {q(c, 1, 3)}).dimension == 0);
}

TEST_CASE("D_l difference bounds") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 6);
  auto m = make_m_xi(c, {q(c, 1, 2)}, discs(1), w);
  HorizontalOptions horiz;
  horiz.probes = SeriesMatrix::identity(c, 1, w);
  DlBoundReport zero = dl_difference_bound(m, {q(c, 1, 2)}, 1, 20, NormValue::one(), horiz);
  for (const auto& o : zero.observed) CHECK(o.is_zero());

  DlBoundReport single = dl_difference_bound(m, {q(c, 1, 2)}, 1, 30, NormValue::one());
  for (std::size_t k = 0; k < single.levels.size(); ++k) {
    int l = single.levels[k];
    NormValue expect = single.operator_constant * NormValue::from_exponent(Rational(-2 * v5(l)));
    CHECK(single.factor_bound[k] == expect);
    CHECK(single.observed[k] <= single.factor_bound[k] * single.previous[k]);
  }

  auto two = u_functor(c, {rat(c, {{0, 0}, {0, Rational(1, 2)}})}, discs(1), w);
  DlBoundReport rep = dl_difference_bound(two, {q(c, 0)}, 1, 40, NormValue::one());
  bool spike = false;
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    std::int64_t l = rep.levels[k];
    std::int64_t worst = std::max(2 * v5(l), v5(4 * l * l - 1));
    if (v5(4 * l * l - 1) > 0) spike = true;
    NormValue b = rep.operator_constant * NormValue::from_exponent(Rational(-worst));
    CHECK(rep.factor_bound[k] == max(b, b.pow(Rational(2))));
    CHECK(rep.observed[k] <= rep.factor_bound[k] * rep.previous[k]);
  }
  CHECK(spike);
}

TEST_CASE("log-convergence") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 6);
  NormValue ap = testing::pnorm(-1, 2);
  auto triv = make_m_xi(c, {q(c, 0)}, discs(1), w);
  LogConvergenceReport t = log_convergence_check(triv, ap, testing::pnorm(-1, 2), 40);
  CHECK(t.eta_report.verdict == Verdict::pass);
  for (std::size_t k = 1; k < t.shell_norms.size(); ++k) CHECK(t.shell_norms[k].is_zero());

  for (const Rational& x : {Rational(1, 2), Rational(-2, 3), Rational(7)}) {
    auto m = make_m_xi(c, {PadicScalar::from_rational(c, x)}, discs(1), w);
    for (const Rational& eta : {Rational(1, 4), Rational(1, 2)}) {
      LogConvergenceReport r = log_convergence_check(m, ap, NormValue::from_exponent(eta), 40);
      CHECK(r.eta_report.verdict == Verdict::pass);
      for (const auto& s : r.shell_norms) CHECK(s <= NormValue::one());
    }
  }

  // d acts by 1/p: |P_k(1/p)| = p^(k + v(k!)).
  auto twist = make_m_xi(c, {q(c, 1, 5)}, discs(1), w);
  for (const Rational& eta : {Rational(1, 4), Rational(1, 2)}) {
    LogConvergenceReport r = log_convergence_check(twist, ap, NormValue::from_exponent(eta), 40);
    CHECK(r.eta_report.verdict == Verdict::fail);
    for (std::size_t k = 0; k < r.shell_norms.size(); ++k)
      CHECK(r.shell_norms[k] == NormValue::from_exponent(Rational(-static_cast<std::int64_t>(k) - legendre(static_cast<std::int64_t>(k), 5))));
  }
}

TEST_CASE("unipotent filtration") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 5);
  auto m = make_m_xi(c, {q(c, 1, 2)}, discs(1), w);
  Filtration f = unipotent_filtration(m, {{q(c, 1, 2)}});
  REQUIRE(f.pieces.size() == 1);
  CHECK(f.pieces[0].dimension == 1);

  auto ext = extension(c, Rational(0), Rational(1, 2), w);
  Filtration fe = unipotent_filtration(ext, {{q(c, 0), q(c, 1, 2)}});
  REQUIRE(fe.pieces.size() == 2);
  CHECK(fe.pieces[0].xi[0].equals(q(c, 0)));
  CHECK(fe.pieces[1].xi[0].equals(q(c, 1, 2)));
  Filtration fr = unipotent_filtration(ext, {{q(c, 1, 2), q(c, 0)}});
  REQUIRE(fr.pieces.size() == 2);
  CHECK(fr.pieces[0].xi[0].equals(q(c, 1, 2)));

  gen::Rng rng(8);
  PadicMatrix j = rat(c, {{Rational(1, 3), 1}, {0, Rational(1, 3)}});
  SeriesMatrix g = gen::gauge(rng, c, 2, 1, 2, false, 5);
  auto jordan = gauge_transform(u_functor(c, {j}, discs(1), w), g.inverse());
  Filtration fj = unipotent_filtration(jordan, {{q(c, 1, 3)}});
  REQUIRE(fj.pieces.size() == 2);
  CHECK(fj.pieces[0].xi[0].equals(q(c, 1, 3)));
  CHECK(fj.pieces[1].xi[0].equals(q(c, 1, 3)));

  CHECK_THROWS_AS(unipotent_filtration(ext, {{q(c, 0)}}), Error);
  CHECK_THROWS_AS(unipotent_filtration(ext, {{q(c, 0), q(c, 1, 2), q(c, 2)}}), Error);
}

TEST_CASE("filtration reproduces exponents on random extensions") {
  auto c = ctx5();
  gen::Rng rng(21);
  Window w = Window::box(1, 0, 4);
  for (int trial = 0; trial < 4; ++trial) {
    auto xs = gen::nid_exponents(rng, c, 2);
    SeriesMatrix g = gen::gauge(rng, c, 2, 1, 2, true, 4);
    auto e = gauge_transform(extension(c, xs[0], xs[1], w), g);
    Filtration f = unipotent_filtration(e, {{PadicScalar::from_rational(c, xs[0]), PadicScalar::from_rational(c, xs[1])}});
    REQUIRE(f.pieces.size() == 2);
    CHECK(f.pieces[0].xi[0].equals(PadicScalar::from_rational(c, xs[0])));
    CHECK(f.pieces[1].xi[0].equals(PadicScalar::from_rational(c, xs[1])));
    for (const auto& m : f.adapted_matrices) CHECK(m.block(1, 0, 1, 1).is_zero());
  }
}

TEST_CASE("submodule extension across the origin") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 6);
  auto ds = direct_sum(make_m_xi(c, {q(c, 0)}, discs(1), w), make_m_xi(c, {q(c, 1, 2)}, discs(1), w));
  SubmoduleExtension all = extend_submodule(ds, SeriesMatrix::identity(c, 2, w), 6);
  CHECK(all.sub.rank() == 2);
  CHECK(rank(all.model_basis) == 2);

  SeriesMatrix e1(c, 2, 1, w);
  e1(0, 0) = LaurentSeries::constant(c, w, q(c, 1));
  SubmoduleExtension first = extend_submodule(ds, e1, 6);
  CHECK(first.model_basis.equals(rat(c, {{1}, {0}})));
  CHECK(first.sub.matrix(0).equals(SeriesMatrix::from_constant(rat(c, {{0}}), Window::exact(1))));

  auto ext = extension(c, Rational(0), Rational(1, 2), w);
  Filtration f = unipotent_filtration(ext, {{q(c, 0), q(c, 1, 2)}});
  SubmoduleExtension sub = extend_submodule(ext, f.pieces[0].sections, 6);
  CHECK(sub.sub.rank() == 1);
  CHECK(same_span(sub.sections, f.pieces[0].sections));

  SeriesMatrix e2(c, 2, 1, w);
  e2(1, 0) = LaurentSeries::constant(c, w, q(c, 1));
  CHECK_THROWS_AS(extend_submodule(ext, e2, 6), Error);
}
