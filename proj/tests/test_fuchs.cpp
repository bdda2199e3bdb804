#include "doctest.h"
#include "generators.hpp"
#include "helpers.hpp"

#include "lognabla/error.hpp"
#include "lognabla/fuchs.hpp"

using namespace lognabla;
using lognabla::testing::ctx5;
using lognabla::testing::legendre;
using lognabla::testing::pnorm;
using lognabla::testing::q;

namespace {

std::vector<AlignedInterval> discs(int n) { return std::vector<AlignedInterval>(n, AlignedInterval::disc(NormValue::one())); }

PadicMatrix rat(const PadicContext& c, std::vector<std::vector<Rational>> rows) { return PadicMatrix::from_rationals(c, rows); }

LaurentSeries mono(const PadicContext& c, const Window& w, MultiIndex i, const PadicScalar& x) {
  return LaurentSeries::monomial(c, w, i, x);
}

// Oracle: solve i Y + N0 Y - Y N0 = R as a linear system on vec(Y).
PadicMatrix sylvester_oracle(const PadicMatrix& n0, const PadicMatrix& r, int i) {
  const auto& c = n0.context();
  std::size_t n = n0.rows();
  PadicMatrix a(c, n * n, n * n), rhs(c, n * n, 1);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t row = x * n + y;
      rhs(row, 0) = r(x, y);
      for (std::size_t k = 0; k < n * n; ++k) a(row, k) = PadicScalar::exact_zero(c);
      a(row, row) += PadicScalar::from_int(c, i);
      for (std::size_t k = 0; k < n; ++k) {
        a(row, k * n + y) += n0(x, k);
        a(row, x * n + k) -= n0(k, y);
      }
    }
  PadicMatrix v = solve(a, rhs);
  PadicMatrix out(c, n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out(x, y) = v(x * n + y, 0);
  return out;
}

PadicMatrix random_model(gen::Rng& rng, const PadicContext& c, std::size_t n) { return gen::commuting_model(rng, c, n, 1)[0]; }

}  // namespace

TEST_CASE("constant connection gives identity gauge") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 10);
  auto e = u_functor(c, {rat(c, {{Rational(1, 2), 1}, {0, Rational(1, 2)}})}, discs(1), w);
  FuchsResult r = solve_constant_form(e, 0, 10);
  CHECK(r.gauge.equals(SeriesMatrix::identity(c, 2, Window::exact(1))));
  CHECK(r.residual.is_zero());
  RadiusBound b = radius_bound(r, NormValue::one());
  CHECK(b.polynomial);
  CHECK(b.certified == NormValue::one());
}

TEST_CASE("nilpotent 2x2 example") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 8);
  SeriesMatrix n(c, 2, 2, w);
  n(0, 1) = mono(c, w, {1, 0, 0}, q(c, 1));
  LogNablaModule e(c, 2, discs(1), w, {n});
  FuchsResult r = solve_constant_form(e, 0, 8);
  SeriesMatrix expect = SeriesMatrix::identity(c, 2, Window::exact(1));
  expect(0, 1) = mono(c, Window::exact(1), {1, 0, 0}, q(c, -1));
  CHECK(r.gauge.equals(expect));
  CHECK(r.n0.is_zero());
  // N M + d M = 0 by direct substitution.
  CHECK((n * r.gauge + r.gauge.log_derivative(0)).is_zero());
  CHECK(radius_bound(r, NormValue::one()).certified == NormValue::one());
}

TEST_CASE("scalar closed form and radius tiers") {
  auto c = ctx5();
  const int order = 30;
  Window w = Window::box(1, 0, order);
  SeriesMatrix n(c, 1, 1, w);
  n(0, 0) = LaurentSeries::constant(c, w, q(c, 2, 3)) + mono(c, w, {1, 0, 0}, q(c, 1));
  LogNablaModule e(c, 1, discs(1), w, {n});
  FuchsResult r = solve_constant_form(e, 0, order);
  PadicScalar fact = q(c, 1);
  for (int i = 0; i <= order; ++i) {
    if (i > 0) fact *= PadicScalar::from_int(c, i);
    PadicScalar mi = r.gauge(0, 0).coefficient({i, 0, 0});
    CHECK(*mi.valuation() == -legendre(i, 5));
    CHECK((mi * fact).equals(q(c, i % 2 ? -1 : 1)));
  }
  CHECK(r.residual.is_zero());
  RadiusBound b = radius_bound(r, NormValue::one());
  CHECK(b.certified < pnorm(-1, 5));
  CHECK(b.certified <= b.certified_sup);
  Rational emp = b.empirical.exponent();
  CHECK(boost::abs(emp - Rational(1, 4)) <= Rational(1, order));
  CHECK(emp == Rational(6, 25));
  CHECK(b.sanity <= NormValue::one());
}

TEST_CASE("shifted commutator inverse matches the linear-system oracle") {
  auto c = ctx5();
  gen::Rng rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t n = 1 + trial % 4;
    PadicMatrix n0 = random_model(rng, c, n);
    ShiftedCommutatorInverse inv(n0);
    auto ev = inv.eigenvalues();
    std::reverse(ev.begin(), ev.end());
    ShiftedCommutatorInverse rev(n0, ev);
    PadicMatrix r = gen::unit_matrix(rng, c, n);
    for (int i : {1, 2, 7, 25}) {
      PadicMatrix y = inv.apply(r, i);
      CHECK((y * PadicScalar::from_int(c, i) + n0 * y - y * n0).equals(r));
      CHECK(y.equals(sylvester_oracle(n0, r, i)));
      CHECK(y.equals(rev.apply(r, i)));
    }
  }
}

TEST_CASE("resonance is reported with the pair") {
  auto c = ctx5();
  Window w = Window::box(1, 0, 6);
  auto e = u_functor(c, {rat(c, {{0, 0}, {0, 3}})}, discs(1), w);
  try {
    solve_constant_form(e, 0, 6);
    FAIL("expected resonance");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::resonance);
    CHECK(std::string(err.what()).find("integer 3") != std::string::npos);
  }
  CHECK_NOTHROW(solve_constant_form(e, 0, 2));
}

TEST_CASE("property: residual vanishes and gauge is unique for random connections") {
  auto c = ctx5();
  gen::Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t mu = 1 + trial % 3;
    const int order = 12;
    Window w = Window::box(1, 0, order);
    SeriesMatrix n = SeriesMatrix::from_constant(random_model(rng, c, mu), w);
    std::uniform_int_distribution<int> d(-5, 5);
    for (std::size_t a = 0; a < mu; ++a)
      for (std::size_t b = 0; b < mu; ++b)
        for (int i = 1; i <= order; ++i) n(a, b).add_to({i, 0, 0}, PadicScalar::from_int(c, d(rng)));
    LogNablaModule e(c, mu, discs(1), w, {n});
    FuchsResult r = solve_constant_form(e, 0, order);
    CHECK(r.residual.is_zero());
    CHECK(r.gauge.coefficient({0, 0, 0}).equals(PadicMatrix::identity(c, mu)));
    // Coefficientwise oracle recurrence.
    std::vector<PadicMatrix> m{PadicMatrix::identity(c, mu)};
    for (int i = 1; i <= order; ++i) {
      PadicMatrix rhs = PadicMatrix::zero(c, mu, mu);
      for (int k = 0; k < i; ++k) rhs -= n.coefficient({i - k, 0, 0}) * m[k];
      m.push_back(sylvester_oracle(r.n0, rhs, i));
      CHECK(m.back().equals(r.gauge.coefficient({i, 0, 0})));
    }
    RadiusBound b = radius_bound(r, NormValue::one());
    CHECK(b.certified <= NormValue::one());
    CHECK(b.sanity <= NormValue::one());
  }
}

TEST_CASE("constant gauge keeps the residue class") {
  auto c = ctx5();
  gen::Rng rng(3);
  Window w = Window::box(1, 0, 6);
  SeriesMatrix n = SeriesMatrix::from_constant(rat(c, {{0, 1}, {0, Rational(1, 2)}}), w);
  n(1, 0) = mono(c, w, {2, 0, 0}, q(c, 3));
  LogNablaModule e(c, 2, discs(1), w, {n});
  PadicMatrix g = gen::unit_matrix(rng, c, 2);
  FuchsResult a = solve_constant_form(e, 0, 6);
  FuchsResult b = solve_constant_form(gauge_transform(e, SeriesMatrix::from_constant(g, Window::exact(1))), 0, 6);
  CHECK(analyze_exponents(a.n0).minimal.equals(analyze_exponents(b.n0).minimal));
  CHECK(b.n0.equals(inverse(g) * a.n0 * g));
}

TEST_CASE("multivariable extension") {
  auto c = ctx5();
  SUBCASE("u_functor round trip") {
    Window w = Window::box(2, 0, 5);
    std::vector<PadicMatrix> model{rat(c, {{0, 1}, {0, 0}}), rat(c, {{Rational(1, 3), 2}, {0, Rational(1, 3)}})};
    ExtensionResult r = multivariable_extend(u_functor(c, model, discs(2), w), 5);
    CHECK(r.descent_ok);
    CHECK(r.model[0].equals(model[0]));
    CHECK(r.model[1].equals(model[1]));
    CHECK(r.gauge.equals(SeriesMatrix::identity(c, 2, Window::exact(2))));
  }
  SUBCASE("nilpotent in the first variable") {
    Window w = Window::box(2, 0, 5);
    SeriesMatrix n1(c, 2, 2, w), n2(c, 2, 2, w);
    n1(0, 1) = mono(c, w, {1, 0, 0}, q(c, 1));
    ExtensionResult r = multivariable_extend(LogNablaModule(c, 2, discs(2), w, {n1, n2}), 5);
    CHECK(r.model[0].is_zero());
    CHECK(r.model[1].is_zero());
    SeriesMatrix expect = SeriesMatrix::identity(c, 2, Window::exact(2));
    expect(0, 1) = mono(c, Window::exact(2), {1, 0, 0}, q(c, -1));
    CHECK(r.gauge.equals(expect));
  }
  SUBCASE("scrambled constants") {
    gen::Rng rng(11);
    for (int trial = 0; trial < 4; ++trial) {
      int nvars = 1 + trial % 2;
      std::size_t mu = 2;
      auto model = gen::commuting_model(rng, c, mu, nvars);
      Window w = Window::box(nvars, 0, 5);
      auto e = gauge_transform(u_functor(c, model, discs(nvars), w), gen::gauge(rng, c, mu, nvars, 3, true, 5));
      ExtensionResult r = multivariable_extend(e, 5);
      CHECK(r.descent_ok);
      for (int j = 0; j < nvars; ++j) CHECK(r.model[j].equals(model[j]));
    }
  }
}
