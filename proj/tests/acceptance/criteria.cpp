#include "criteria.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include "lognabla/cohom.hpp"
#include "lognabla/error.hpp"
#include "lognabla/fixtures.hpp"
#include "lognabla/fuchs.hpp"
#include "lognabla/projector.hpp"
#include "lognabla/robba.hpp"
#include "lognabla/sigma.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

namespace lognabla::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

NormValue pn(std::int64_t num, std::int64_t den = 1) { return NormValue::from_exponent(-Rational(num, den)); }

std::vector<AlignedInterval> discs(int n) {
  return std::vector<AlignedInterval>(static_cast<std::size_t>(n), AlignedInterval::disc(NormValue::one()));
}

std::vector<AlignedInterval> annuli(int n) {
  return std::vector<AlignedInterval>(static_cast<std::size_t>(n), AlignedInterval::annulus(pn(-1), NormValue::one()));
}

Rational abs_r(const Rational& r) { return r < Rational(0) ? -r : r; }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail << "FAIL " << why << "; ";
    pass = pass && ok;
  }
};

// N0 = S (D + J) S^-1 with NID diagonal D; J couples equal exponents.
PadicMatrix random_residue(gen::Rng& rng, const PadicContext& c, std::size_t mu, std::vector<Rational>* exps) {
  auto xs = gen::nid_exponents(rng, c, mu);
  std::uniform_int_distribution<int> coin(0, 1);
  PadicMatrix d = PadicMatrix::zero(c, mu, mu);
  if (mu >= 2 && coin(rng)) {
    xs[1] = xs[0];
    d(0, 1) = PadicScalar::from_int(c, 1);
  }
  for (std::size_t k = 0; k < mu; ++k) d(k, k) = PadicScalar::from_rational(c, xs[k]);
  if (exps) *exps = xs;
  PadicMatrix s = gen::unit_matrix(rng, c, mu);
  return s * d * inverse(s);
}

Outcome c1_fuchs_residual(std::uint64_t seed) {
  Outcome o;
  const PadicContext c(5, 20);
  const int order = 30;
  gen::Rng rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5), deg(1, 3);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t mu = 1 + static_cast<std::size_t>(k % 4);
    const Window w = Window::box(1, 0, order);
    SeriesMatrix n = SeriesMatrix::from_constant(random_residue(rng, c, mu, nullptr), w);
    const int dmax = deg(rng);
    for (std::size_t a = 0; a < mu; ++a)
      for (std::size_t b = 0; b < mu; ++b)
        for (int i = 1; i <= dmax; ++i) n(a, b).add_to({i, 0, 0}, PadicScalar::from_int(c, coef(rng)));
    LogNablaModule e(c, mu, discs(1), w, {n});
    const auto t0 = Clock::now();
    FuchsResult r = solve_constant_form(e, 0, order);
    const double secs = since(t0);
    worst = std::max(worst, secs);
    o.require(r.residual.is_zero(), "solver residual nonzero in case " + std::to_string(k));
    o.require(oracle::fuchs_defect(e, r.gauge, r.n0).is_zero(), "oracle residual nonzero in case " + std::to_string(k));
    o.require(r.n0.equals(n.coefficient({0, 0, 0})), "N0 differs from the residue in case " + std::to_string(k));
    o.require(secs < 1.0, "case " + std::to_string(k) + " took " + std::to_string(secs) + " s");
  }
  o.detail << "100 cases, residual 0, max runtime " << worst << " s (< 1 s)";
  return o;
}

Outcome c2_scalar_closed_form(std::uint64_t) {
  Outcome o;
  const PadicContext c(5, 20);
  const int order = 30;
  const auto oracle = oracle::exp_minus_coefficients(c, order);
  Rational emp_gap(0);
  NormValue cert;
  for (const Rational xi : {Rational(0), Rational(1, 2), Rational(2, 3)}) {
    const Window w = Window::box(1, 0, order);
    SeriesMatrix n(c, 1, 1, w);
    n(0, 0).add_to({0, 0, 0}, PadicScalar::from_rational(c, xi));
    n(0, 0).add_to({1, 0, 0}, PadicScalar::from_int(c, 1));
    LogNablaModule e(c, 1, discs(1), w, {n});
    FuchsResult r = solve_constant_form(e, 0, order);
    for (int i = 0; i <= 25; ++i) {
      const PadicScalar mi = r.gauge(0, 0).coefficient({i, 0, 0});
      o.require(mi.equals(oracle[static_cast<std::size_t>(i)]), "M_" + std::to_string(i) + " differs from (-1)^i/i!");
      o.require(mi.valuation() && *mi.valuation() == -oracle::legendre(i, 5), "v(M_" + std::to_string(i) + ") != -v(i!)");
    }
    RadiusBound b = radius_bound(r, NormValue::one());
    o.require(b.certified < pn(-1, 5), "certified bound not below 5^(-1/5)");
    const Rational gap = abs_r(b.empirical.exponent() - Rational(1, 4));
    o.require(gap <= Rational(1, order), "empirical bound more than one step from 5^(-1/4)");
    emp_gap = std::max(emp_gap, gap);
    cert = b.certified;
  }
  o.detail << "M_i = (-1)^i/i! for i <= 25 at xi in {0, 1/2, 2/3}; certified " << cert.to_string(5)
           << " < 5^(-1/5); empirical gap to 1/4 is " << to_string(emp_gap) << " <= 1/" << order;
  return o;
}

Outcome c3_round_trip(std::uint64_t seed) {
  Outcome o;
  const PadicContext c(5, 20);
  gen::Rng rng(seed + 3);
  for (int k = 0; k < 50; ++k) {
    const int nvars = 1 + k % 2;
    const std::size_t mu = 1 + static_cast<std::size_t>((k / 2) % 3);
    const Window w = Window::box(nvars, 0, 5);
    auto model = gen::commuting_model(rng, c, mu, nvars);
    auto e = gauge_transform(u_functor(c, model, discs(nvars), w), gen::gauge(rng, c, mu, nvars, 3, true, 5));
    ExtensionResult r = multivariable_extend(e, 5);
    const std::string tag = " in case " + std::to_string(k);
    o.require(r.descent_ok, "descent check failed" + tag);
    for (int j = 0; j < nvars; ++j) o.require(r.model[static_cast<std::size_t>(j)].equals(model[static_cast<std::size_t>(j)]), "W differs" + tag);
    // Rebuilding from the recovered data reproduces the input connection.
    auto back = gauge_transform(u_functor(c, r.model, discs(nvars), w), r.gauge.inverse());
    for (int j = 0; j < nvars; ++j) o.require((back.matrix(j) - e.matrix(j)).is_zero(), "reconstruction differs" + tag);
  }
  o.detail << "50 cases (n <= 2, rank <= 3): W recovered exactly, descent exact, reconstruction exact";
  return o;
}

Outcome c4_exponent_invariance(std::uint64_t seed) {
  Outcome o;
  const PadicContext c(5, 20);
  gen::Rng rng(seed + 4);
  for (int k = 0; k < 50; ++k) {
    const std::size_t mu = 1 + static_cast<std::size_t>(k % 3);
    const Window w = Window::box(1, 0, 6);
    std::vector<Rational> xs;
    PadicMatrix n0 = random_residue(rng, c, mu, &xs);
    auto e = gauge_transform(u_functor(c, {n0}, discs(1), w), gen::gauge(rng, c, mu, 1, 3, false, 6));
    ExponentAnalysis a = residue(e, 0).analysis;
    std::vector<std::pair<Rational, std::size_t>> got, want;
    for (std::size_t i = 0; i < a.exponents.size(); ++i) {
      auto r = a.exponents[i].value.to_rational();
      o.require(r.has_value(), "exponent without rational form");
      if (r) got.emplace_back(*r, a.algebraic_multiplicity[i]);
    }
    std::sort(xs.begin(), xs.end());
    for (const auto& x : xs) {
      if (!want.empty() && want.back().first == x)
        ++want.back().second;
      else
        want.emplace_back(x, 1);
    }
    std::sort(got.begin(), got.end());
    o.require(got == want, "exponent multiset changed in case " + std::to_string(k));
  }
  o.detail << "50 gauges with invertible constant term: exponent multisets equal";
  return o;
}

Outcome c5_hom_dimensions(std::uint64_t) {
  Outcome o;
  const PadicContext c(5, 20);
  const int bound = 4;
  const Window w = Window::box(1, -bound, bound);
  const Rational xi(1, 3);
  std::ostringstream dims;
  for (const Rational d : {Rational(0), Rational(1), Rational(-1), Rational(3), Rational(-3), Rational(1, 2), Rational(1, 3)}) {
    auto e = make_m_xi(c, {PadicScalar::from_rational(c, xi)}, annuli(1), w);
    auto f = make_m_xi(c, {PadicScalar::from_rational(c, xi + d)}, annuli(1), w);
    HomReport h = hom_space(e, f);
    const std::size_t oracle = oracle::twisted_kernel_dimension(c, d, -bound, bound);
    const std::size_t expect = (d.denominator() == 1 && abs_r(d) <= Rational(bound)) ? 1 : 0;
    o.require(h.dimension == oracle && h.dimension == expect, "dim Hom for difference " + to_string(d));
    for (const auto& b : h.basis) {
      // The section of M_(xi'-xi) is t^(xi - xi') up to a constant.
      const auto support = b.support();
      o.require(support.size() == 1 && support[0][0] == -static_cast<int>(d.numerator()), "Hom basis support");
    }
    dims << to_string(d) << ":" << h.dimension << " ";
  }
  o.detail << "dims " << dims.str() << "match the window-solve oracle";
  return o;
}

Outcome c6_homotopy(std::uint64_t) {
  Outcome o;
  const PadicContext c(5, 20);
  const int bound = 30;
  std::size_t total = 0;
  for (const std::vector<Rational>& alpha : {std::vector<Rational>{Rational(1, 2)}, std::vector<Rational>{Rational(1, 2), Rational(1, 3)}}) {
    const int n = static_cast<int>(alpha.size());
    std::vector<PadicScalar> a;
    for (const auto& x : alpha) a.push_back(PadicScalar::from_rational(c, x));
    auto cx = LogDeRhamComplex::twisted(c, a, Window::box(n, -bound, bound));
    HomotopyCheck h = cx.verify_homotopy(bound);
    std::size_t checked = 0;
    const std::size_t fails = oracle::homotopy_failures(cx, bound, &checked);
    o.require(h.failures == 0 && h.defect.is_zero(), "library homotopy check reports a defect");
    o.require(fails == 0, "oracle finds " + std::to_string(fails) + " failing monomials");
    o.require(checked == h.monomials, "monomial counts differ");
    total += checked;
  }
  o.detail << total << " monomial forms with |I| <= " << bound << " for alpha in {1/2, (1/2,1/3)}: zero defect";
  return o;
}

Outcome c7_ext_comparison(std::uint64_t) {
  Outcome o;
  const PadicContext c(5, 20);
  const Window w = Window::box(1, -4, 4);
  auto model = [&](const std::string& name) {
    auto e = fixture(name, c);
    if (e.matrix(0).is_constant()) return e.matrix(0).coefficient({0, 0, 0});
    const LogNablaModule boxed(c, e.rank(), e.intervals(), Window::box(1, 0, 8), e.matrices());
    return multivariable_extend(boxed, 8).model[0];
  };
  const PadicMatrix jordan_half = PadicMatrix::from_rationals(c, {{Rational(1, 2), Rational(1)}, {Rational(0), Rational(1, 2)}});
  std::vector<std::pair<std::string, PadicMatrix>> mods{{"trivial", model("trivial")}, {"M_half", model("M_half")},
                                                        {"jordan", model("jordan")}, {"jordan(1/2)", jordan_half},
                                                        {"extension", model("extension")}};
  const std::vector<std::pair<int, int>> pairs{{0, 0}, {0, 1}, {1, 1}, {2, 2}, {2, 0}, {3, 3}, {3, 1}, {4, 0}, {4, 1}, {4, 4}};
  std::ostringstream dims;
  for (const auto& [a, b] : pairs) {
    const auto& e = mods[static_cast<std::size_t>(a)];
    const auto& f = mods[static_cast<std::size_t>(b)];
    ExtComparison x = ext_compare({e.second}, {f.second}, annuli(1), w);
    const auto oracle = oracle::commutant_ext(e.second, f.second);
    const std::string tag = e.first + "," + f.first;
    o.require(x.equal, "model and annulus differ for " + tag);
    o.require(x.model[0] == oracle[0] && x.model[1] == oracle[1], "model differs from the commutant oracle for " + tag);
    o.require(x.annulus[0] == oracle[0] && x.annulus[1] == oracle[1], "annulus differs from the commutant oracle for " + tag);
    dims << "(" << tag << ")=" << x.model[0] << x.model[1] << " ";
  }
  o.detail << "Ext0 Ext1: " << dims.str();
  return o;
}

Outcome c8_dl_extraction(std::uint64_t seed) {
  Outcome o;
  // The D_l iteration consumes about sum v(l +- d) digits per pass.
  const PadicContext c(5, 26);
  gen::Rng rng(seed + 8);
  std::int64_t max_loss = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t mu = 1 + static_cast<std::size_t>(k % 3);
    const Window w = Window::box(1, 0, 3);
    auto model = gen::commuting_model(rng, c, mu, 1);
    SeriesMatrix g = gen::gauge(rng, c, mu, 1, 2, false, 3);
    auto e = gauge_transform(u_functor(c, model, discs(1), w), g.inverse());
    auto table = exponent_table(e);
    const std::vector<PadicScalar> xi{table[0].xi[static_cast<std::size_t>(k) % table[0].xi.size()]};
    HorizontalSpace h = horizontal_sections(e, xi);
    const std::string tag = " in case " + std::to_string(k);
    o.require(h.dimension == oracle::eigenspace_dimension(model, xi), "dimension differs from the eigenspace oracle" + tag);
    o.require(oracle::horizontal(e, h.sections, xi), "returned sections are not horizontal" + tag);
    o.require(h.run >= 5, "run length below 5" + tag);
    o.require(h.eta_report.eta == pn(-1, 2), "eta is not p^(-1/2)" + tag);
    o.require(h.eta_report.verdict == Verdict::pass, "eta-null verdict " + to_string(h.eta_report.verdict) + tag);
    o.require(h.eta_report.decaying, "tail does not decay" + tag);
    max_loss = std::max(max_loss, h.precision_loss);
  }
  o.detail << "20 scrambled constants (rank <= 3, cap 26): dimension matches, eta = 5^(-1/2) tail decays, run 5, max loss "
           << max_loss << " digits";
  return o;
}

Outcome c9_filtration(std::uint64_t seed) {
  Outcome o;
  const PadicContext c(5, 20);
  gen::Rng rng(seed + 9);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int k = 0; k < 10; ++k) {
    const Window w = Window::box(1, 0, 5);
    auto xs = gen::nid_exponents(rng, c, 2);
    const PadicScalar a = PadicScalar::from_rational(c, xs[0]), b = PadicScalar::from_rational(c, xs[1]);
    SeriesMatrix n(c, 2, 2, w);
    n(0, 0).add_to({0, 0, 0}, a);
    n(1, 1).add_to({0, 0, 0}, b);
    for (int i = 0; i <= 2; ++i) n(0, 1).add_to({i, 0, 0}, PadicScalar::from_int(c, coef(rng)));
    n(0, 1).add_to({1, 0, 0}, PadicScalar::from_int(c, 1));
    LogNablaModule e(c, 2, discs(1), w, {n});
    if (k % 2) e = gauge_transform(e, gen::gauge(rng, c, 2, 1, 2, true, 5));
    Filtration f = unipotent_filtration(e, {{a, b}});
    const std::string tag = " in case " + std::to_string(k);
    o.require(f.pieces.size() == 2, "filtration length " + std::to_string(f.pieces.size()) + tag);
    std::vector<Rational> graded;
    for (const auto& p : f.pieces) {
      o.require(p.dimension == 1, "graded piece of dimension " + std::to_string(p.dimension) + tag);
      if (auto r = p.xi[0].to_rational()) graded.push_back(*r);
    }
    std::sort(graded.begin(), graded.end());
    std::sort(xs.begin(), xs.end());
    o.require(graded == xs, "graded exponents differ" + tag);
    // Oracle: the residue's exponents.
    std::vector<Rational> res;
    for (const auto& x : residue(e, 0).analysis.exponents)
      if (auto r = x.value.to_rational()) res.push_back(*r);
    std::sort(res.begin(), res.end());
    o.require(res == xs, "residue exponents differ" + tag);
  }
  o.detail << "10 NID extensions: length-2 filtrations with graded exponents {xi, xi'}";
  return o;
}

Outcome c10_type(std::uint64_t) {
  Outcome o;
  std::ostringstream est;
  for (const Rational a : {Rational(1, 2), Rational(1, 3), Rational(3)}) {
    TypeEstimate t = type_estimate(a, 5, 625);
    const Rational q = t.estimate.exponent();
    const Rational step(ceil_log(5, 625), t.tail_start);
    o.require(q <= step, "R-hat for " + to_string(a) + " is more than one step below 1");
    o.require(t.verdict == TypeVerdict::consistent_with_type_1, "verdict for " + to_string(a));
    est << to_string(a) << ":5^(-" << to_string(q) << ") ";
  }
  const auto t0 = Clock::now();
  const DigitStream l = DigitStream::from_positions(2, {1, 2, 4, 16, 65536}, std::int64_t{1} << 20);
  TypeEstimate t = type_estimate(l, 2, 131072);
  const double secs = since(t0);
  o.require(t.estimate <= NormValue::from_exponent(Rational(1, 2)), "Liouville R-hat above 2^(-1/2)");
  o.require(t.verdict == TypeVerdict::liouville_suspect, "Liouville verdict");
  o.require(secs < 10.0, "Liouville run took " + std::to_string(secs) + " s");
  o.detail << "rationals " << est.str() << "within one step of 1; Liouville R-hat " << t.estimate.to_string(2) << " at s = " << t.witness
           << ", liouville-suspect, " << secs << " s";
  return o;
}

Outcome c11_robba(std::uint64_t) {
  Outcome o;
  const PadicContext c(5, 20);
  const int n_max = 50;
  const std::vector<NormValue> radii{pn(-1, 2), pn(-1, 4)};
  RobbaReport half = robba_check(fixture("M_half", c), radii, n_max);
  o.require(half.tolerance == Rational(1, 2 * n_max), "tolerance is not 1/(2 n_max)");
  o.require(half.robba_consistent, "M_half not Robba-consistent");
  Rational gap(0), closest(0), widest(0);
  for (const auto& v : half.verdicts) {
    if (v.max_gap) gap = std::max(gap, *v.max_gap);
    const NormValue limit = NormValue::from_exponent(Rational(1, 4)) / v.radius;
    const Rational near = v.reference.tail_lower.exponent() - limit.exponent();
    o.require(abs_r(near) <= Rational(1, n_max), "reference tail more than one step from p^(-1/(p-1))/rho");
    closest = std::max(closest, abs_r(near));
    for (int n = n_max / 2; n <= n_max; ++n)
      widest = std::max(widest, abs_r(v.reference.roots[static_cast<std::size_t>(n - 1)].exponent() - limit.exponent()));
  }
  RobbaReport sing = robba_check(fixture("dt-over-t2", c), radii, n_max);
  for (const auto& v : sing.verdicts) o.require(!v.consistent, "dt/t^2 consistent at " + v.radius.to_string(5));
  o.detail << "M_half tail gap " << to_string(gap) << " <= 1/100; dt/t^2 non-Robba at both radii; reference closest gap "
           << to_string(closest) << " <= 1/50 (largest tail gap " << to_string(widest) << ")";
  return o;
}

Outcome c12_log_convergence(std::uint64_t) {
  Outcome o;
  const PadicContext c(5, 20);
  const Window w = Window::box(1, 0, 6);
  const NormValue ap = pn(-1, 2);
  const int bound = 40;
  for (const Rational xi : {Rational(0), Rational(1, 2), Rational(-2, 3), Rational(7)}) {
    auto m = make_m_xi(c, {PadicScalar::from_rational(c, xi)}, discs(1), w);
    for (const Rational eta : {Rational(1, 4), Rational(1, 2)}) {
      LogConvergenceReport r = log_convergence_check(m, ap, NormValue::from_exponent(eta), bound);
      o.require(r.eta_report.verdict == Verdict::pass, "M_" + to_string(xi) + " fails at eta = p^(-" + to_string(eta) + ")");
      for (const auto& s : r.shell_norms) o.require(s <= NormValue::one(), "shell norm above 1 for M_" + to_string(xi));
    }
  }
  auto twist = fixture("p-inverse-twist", c);
  twist = LogNablaModule(c, 1, twist.intervals(), w, twist.matrices());
  std::ostringstream ev;
  for (const Rational eta : {Rational(1, 4), Rational(1, 2)}) {
    LogConvergenceReport r = log_convergence_check(twist, ap, NormValue::from_exponent(eta), bound);
    o.require(r.eta_report.verdict == Verdict::fail, "twist not rejected at eta = p^(-" + to_string(eta) + ")");
    for (std::size_t k = 0; k < r.shell_norms.size(); ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      o.require(r.shell_norms[k] == NormValue::from_exponent(Rational(-kk - oracle::legendre(kk, 5))),
                "twist shell " + std::to_string(k) + " differs from p^(k + v(k!))");
    }
    ev << r.shell_norms.back().to_string(5) << " ";
  }
  o.detail << "M_xi (xi in {0, 1/2, -2/3, 7}) pass at eta in {5^(-1/4), 5^(-1/2)}; twist fails with shell 40 = " << ev.str()
           << "= 5^(40 + v(40!))";
  return o;
}

struct Entry {
  int id;
  const char* name;
  std::function<Outcome(std::uint64_t)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {1, "fuchs-residual", c1_fuchs_residual},
      {2, "scalar-closed-form", c2_scalar_closed_form},
      {3, "round-trip", c3_round_trip},
      {4, "exponent-invariance", c4_exponent_invariance},
      {5, "hom-dimensions", c5_hom_dimensions},
      {6, "homotopy-identity", c6_homotopy},
      {7, "ext-comparison", c7_ext_comparison},
      {8, "dl-extraction", c8_dl_extraction},
      {9, "filtration", c9_filtration},
      {10, "type-estimator", c10_type},
      {11, "robba", c11_robba},
      {12, "log-convergence", c12_log_convergence},
  };
  return r;
}

}  // namespace

int criterion_count() { return static_cast<int>(registry().size()); }

std::vector<CriterionResult> run_criteria(std::uint64_t seed, const std::vector<int>& only) {
  std::vector<CriterionResult> out;
  for (const auto& e : registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    const auto t0 = Clock::now();
    try {
      Outcome o = e.run(seed);
      r.pass = o.pass;
      r.detail = o.detail.str();
    } catch (const Error& ex) {
      r.pass = false;
      r.detail = std::string("error ") + std::string(to_string(ex.kind())) + ": " + ex.detail();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = since(t0);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lognabla::acceptance
