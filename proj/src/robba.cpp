#include "lognabla/robba.hpp"

#include "lognabla/error.hpp"
#include "lognabla/kernels.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <map>

namespace lognabla {

namespace {

constexpr std::int64_t kNoBound = std::numeric_limits<std::int64_t>::max() / 4;

void check_orders(int n_max) {
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be positive");
}

void check_radius(const NormValue& rho) {
  if (rho.is_zero() || rho >= NormValue::one())
    throw Error(ErrorKind::invalid_argument, "radius must satisfy 0 < rho < 1");
}

void fill_roots(SpectralEstimate& s) {
  s.roots.clear();
  for (int n = 1; n <= s.n_max; ++n) {
    const NormValue& v = s.norms[static_cast<std::size_t>(n - 1)];
    s.roots.push_back(v.is_zero() ? NormValue::zero() : v.root(n));
  }
  const int first = std::max(1, s.n_max / 2);
  s.tail_upper = NormValue::zero();
  s.tail_lower = s.roots[static_cast<std::size_t>(first - 1)];
  for (int n = first; n <= s.n_max; ++n) {
    s.tail_upper = max(s.tail_upper, s.roots[static_cast<std::size_t>(n - 1)]);
    s.tail_lower = min(s.tail_lower, s.roots[static_cast<std::size_t>(n - 1)]);
  }
}

// Coefficients of t^j e in a univariate section; indices above hi are unknown.
struct Section {
  std::map<std::int64_t, std::vector<PadicScalar>> terms;
  std::int64_t hi = kNoBound;

  std::int64_t lo() const { return terms.empty() ? hi : terms.begin()->first; }
};

struct Operator {
  std::map<std::int64_t, PadicMatrix> n;
  std::int64_t hi = kNoBound;
  std::int64_t lo = 0;
};

Operator extract(const LogNablaModule& e) {
  Operator op;
  const SeriesMatrix& m = e.matrix(0);
  bool any = false;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const LaurentSeries& s = m(r, c);
      if (s.window().hi[0] < kUnbounded) op.hi = std::min<std::int64_t>(op.hi, s.window().hi[0]);
      for (const auto& [i, x] : s.terms()) {
        if (x.is_exact_zero()) continue;
        auto it = op.n.find(i[0]);
        if (it == op.n.end())
          it = op.n.emplace(i[0], PadicMatrix(e.context(), m.rows(), m.cols())).first;
        it->second(r, c) = x;
        op.lo = any ? std::min<std::int64_t>(op.lo, i[0]) : i[0];
        any = true;
      }
    }
  }
  return op;
}

void accumulate(std::vector<PadicScalar>& dst, const std::vector<PadicScalar>& src) {
  for (std::size_t b = 0; b < dst.size(); ++b) dst[b] += src[b];
}

Section apply(const Operator& op, const Section& v, const PadicContext& ctx, std::size_t rank) {
  Section out;
  if (v.terms.empty() && v.hi >= kNoBound) return out;
  const std::int64_t lo = v.lo();
  std::int64_t hi = v.hi;
  if (op.hi < kNoBound) hi = std::min(hi, op.hi + lo);
  if (v.hi < kNoBound) hi = std::min(hi, v.hi + op.lo);
  out.hi = hi >= kNoBound ? kNoBound : hi - 1;

  auto slot = [&](std::int64_t j) -> std::vector<PadicScalar>& {
    auto it = out.terms.find(j);
    if (it == out.terms.end())
      it = out.terms.emplace(j, std::vector<PadicScalar>(rank, PadicScalar::exact_zero(ctx))).first;
    return it->second;
  };
  for (const auto& [j, c] : v.terms) {
    if (j != 0) {
      const PadicScalar f = PadicScalar::from_int(ctx, j);
      std::vector<PadicScalar> s(rank);
      for (std::size_t b = 0; b < rank; ++b) s[b] = f * c[b];
      accumulate(slot(j - 1), s);
    }
    for (const auto& [m, nm] : op.n) {
      std::vector<PadicScalar> s(rank, PadicScalar::exact_zero(ctx));
      for (std::size_t r = 0; r < rank; ++r)
        for (std::size_t b = 0; b < rank; ++b) s[r] += nm(r, b) * c[b];
      accumulate(slot(j + m - 1), s);
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();) {
    const bool zero = std::all_of(it->second.begin(), it->second.end(),
                                  [](const PadicScalar& x) { return x.is_exact_zero(); });
    if (it->first > out.hi || zero)
      it = out.terms.erase(it);
    else
      ++it;
  }
  return out;
}

NormValue section_norm(const Section& v, const NormValue& rho) {
  NormValue m = NormValue::zero();
  for (const auto& [j, c] : v.terms)
    for (const auto& x : c)
      if (!x.is_zero()) m = max(m, x.norm() * rho.pow(Rational(j)));
  return m;
}

}  // namespace

std::int64_t default_probe_window(std::uint32_t p, int n_max) {
  check_orders(n_max);
  return n_max + 2 * static_cast<std::int64_t>(ipow(p, ceil_log(p, n_max)));
}

SpectralEstimate derivation_spectral_norm(std::uint32_t p, const NormValue& rho, int n_max,
                                          std::int64_t k_window) {
  check_orders(n_max);
  check_radius(rho);
  if (k_window < 0) k_window = default_probe_window(p, n_max);
  SpectralEstimate s;
  s.radius = rho;
  s.n_max = n_max;
  s.probe_window = k_window;
  s.probes = static_cast<std::size_t>(2 * k_window + 1);
  s.exact_on_window = true;
  const std::vector<std::int64_t> v = falling_min_omp(p, 0, 1, n_max, k_window);
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t val = v[static_cast<std::size_t>(n)];
    s.norms.push_back(val < 0 ? NormValue::zero()
                              : NormValue::from_exponent(Rational(val)) / rho.pow(Rational(n)));
  }
  s.upper_root = NormValue::one() / rho;
  fill_roots(s);
  return s;
}

SpectralEstimate module_spectral_norm(const LogNablaModule& e, const NormValue& rho, int n_max,
                                      std::int64_t probe_window) {
  check_orders(n_max);
  if (e.nvars() != 1) throw Error(ErrorKind::invalid_argument, "spectral norms need a univariate module");
  if (rho.is_zero() || !e.intervals().at(0).contains(rho))
    throw Error(ErrorKind::out_of_domain, "radius " + rho.to_string(e.context().p) + " outside the module's interval");
  const PadicContext& ctx = e.context();
  if (probe_window < 0) probe_window = default_probe_window(ctx.p, n_max);
  const Operator op = extract(e);
  const std::size_t rank = e.rank();
  const std::int64_t k_lo = e.intervals()[0].contains_zero() ? 0 : -probe_window;

  SpectralEstimate s;
  s.radius = rho;
  s.n_max = n_max;
  s.probe_window = probe_window;
  s.norms.assign(static_cast<std::size_t>(n_max), NormValue::zero());
  s.exact_on_window = op.n.empty() || (op.n.size() == 1 && op.n.begin()->first == 0 && rank == 1);
  for (std::int64_t k = k_lo; k <= probe_window; ++k) {
    const NormValue base = rho.pow(Rational(k));
    for (std::size_t b = 0; b < rank; ++b) {
      Section v;
      std::vector<PadicScalar> c(rank, PadicScalar::exact_zero(ctx));
      c[b] = PadicScalar::from_int(ctx, 1);
      v.terms.emplace(k, c);
      ++s.probes;
      for (int n = 1; n <= n_max; ++n) {
        const std::int64_t before = v.lo();
        v = apply(op, v, ctx, rank);
        if (v.hi < before + std::min<std::int64_t>(0, op.lo) - 1)
          throw Error(ErrorKind::probe_exhaustion,
                      "probe t^" + std::to_string(k) + " undetermined after " + std::to_string(n) + " steps");
        auto& slot = s.norms[static_cast<std::size_t>(n - 1)];
        slot = max(slot, section_norm(v, rho) / base);
      }
    }
  }
  if (op.hi >= kNoBound) {
    NormValue nn = NormValue::zero();
    for (const auto& [m, nm] : op.n)
      for (std::size_t r = 0; r < rank; ++r)
        for (std::size_t c = 0; c < rank; ++c)
          if (!nm(r, c).is_zero()) nn = max(nn, nm(r, c).norm() * rho.pow(Rational(m)));
    s.upper_root = max(NormValue::one(), nn) / rho;
  }
  fill_roots(s);
  return s;
}

RobbaReport robba_check(const LogNablaModule& e, const std::vector<NormValue>& radii, int n_max,
                        const Rational& tolerance, std::int64_t probe_window) {
  check_orders(n_max);
  for (const auto& r : radii) check_radius(r);
  RobbaReport rep;
  rep.n_max = n_max;
  rep.tolerance = tolerance > Rational(0) ? tolerance : Rational(1, 2 * n_max);
  rep.verdicts.resize(radii.size());
  std::vector<std::exception_ptr> errors(radii.size());

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < radii.size(); ++i) {
    try {
      RobbaVerdict v;
      v.radius = radii[i];
      v.module = module_spectral_norm(e, radii[i], n_max, probe_window);
      v.reference = derivation_spectral_norm(e.context().p, radii[i], n_max, probe_window);
      Rational gap(0);
      bool finite = true;
      for (int n = std::max(1, n_max / 2); n <= n_max; ++n) {
        const NormValue& a = v.module.roots[static_cast<std::size_t>(n - 1)];
        const NormValue& b = v.reference.roots[static_cast<std::size_t>(n - 1)];
        if (a.is_zero() || b.is_zero()) {
          finite = false;
          break;
        }
        const Rational d = a.log() - b.log();
        gap = std::max(gap, d < Rational(0) ? -d : d);
      }
      if (finite) v.max_gap = gap;
      v.consistent = finite && gap <= rep.tolerance;
      rep.verdicts[i] = std::move(v);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& ex : errors)
    if (ex) std::rethrow_exception(ex);
  rep.robba_consistent = std::all_of(rep.verdicts.begin(), rep.verdicts.end(),
                                     [](const RobbaVerdict& v) { return v.consistent; });
  return rep;
}

}  // namespace lognabla
