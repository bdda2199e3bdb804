#include "lognabla/fuchs.hpp"

#include "lognabla/error.hpp"

#include <algorithm>

namespace lognabla {

namespace {

std::vector<NormValue> base_radii(const LogNablaModule& e) {
  std::vector<NormValue> r;
  for (const auto& iv : e.intervals()) r.push_back(iv.upper ? *iv.upper : NormValue::one());
  return r;
}

std::string exponent_name(const PadicScalar& x) {
  auto r = x.to_rational();
  return r ? to_string(*r) : x.to_string();
}

// Applies a constant linear map to every coefficient of a series matrix.
template <class F>
SeriesMatrix map_coefficients(const SeriesMatrix& r, F&& f) {
  SeriesMatrix out(r.context(), r.rows(), r.cols(), r.window());
  for (const auto& idx : r.support()) {
    PadicMatrix y = f(r.coefficient(idx));
    for (std::size_t a = 0; a < r.rows(); ++a)
      for (std::size_t b = 0; b < r.cols(); ++b)
        if (!y(a, b).is_exact_zero()) out(a, b).set(idx, y(a, b));
  }
  return out;
}

}  // namespace

namespace {

std::vector<PadicScalar> exponents_of(const PadicMatrix& n0, int search_depth) {
  std::vector<PadicScalar> values;
  for (const auto& r : analyze_exponents(n0, search_depth).exponents) values.push_back(r.value);
  return values;
}

}  // namespace

ShiftedCommutatorInverse::ShiftedCommutatorInverse(const PadicMatrix& n0, int search_depth)
    : ShiftedCommutatorInverse(n0, exponents_of(n0, search_depth)) {}

ShiftedCommutatorInverse::ShiftedCommutatorInverse(const PadicMatrix& n0, const std::vector<PadicScalar>& eigenvalues)
    : ctx_(n0.context()) {
  EigenDecomposition d = generalized_eigenspaces(n0, eigenvalues);
  s_ = d.adapted_basis;
  sinv_ = d.adapted_inverse;
  int emax = 1;
  for (std::size_t k = 0; k < d.blocks.size(); ++k) {
    xi_.push_back(d.blocks[k].eigenvalue);
    emax = std::max(emax, d.blocks[k].nilpotency_index);
    for (std::size_t i = 0; i < d.blocks[k].dimension; ++i) block_of_.push_back(k);
  }
  e_ = 2 * emax - 1;
  PadicMatrix na = sinv_ * n0 * s_;
  nil_ = na;
  for (std::size_t i = 0; i < na.rows(); ++i) nil_(i, i) = na(i, i) - xi_[block_of_[i]];
  // Off-block entries of the adapted matrix vanish at precision.
  for (std::size_t i = 0; i < na.rows(); ++i)
    for (std::size_t j = 0; j < na.cols(); ++j)
      if (block_of_[i] != block_of_[j]) {
        if (!nil_(i, j).is_zero()) throw Error(ErrorKind::precision_exhausted, "adapted residue is not block diagonal");
        nil_(i, j) = PadicScalar::exact_zero(ctx_);
      }
  NormValue kappa = s_.norm() * sinv_.norm();
  kappa2_ = kappa * kappa;
  nil_norm_ = nil_.norm();
}

void ShiftedCommutatorInverse::check_resonance(int order) const {
  for (std::size_t l = 0; l < xi_.size(); ++l)
    for (std::size_t k = 0; k < xi_.size(); ++k) {
      if (l == k) continue;
      PadicScalar d = xi_[l] - xi_[k];
      for (int j = 1; j <= order; ++j)
        if ((d + PadicScalar::from_int(ctx_, j)).is_zero())
          throw Error(ErrorKind::resonance, "exponents " + exponent_name(xi_[k]) + " and " + exponent_name(xi_[l]) +
                                                " differ by the integer " + std::to_string(j));
    }
}

NormValue ShiftedCommutatorInverse::max_inverse_factor(int i) const {
  NormValue m = NormValue::zero();
  for (const auto& xl : xi_)
    for (const auto& xk : xi_) m = max(m, NormValue::one() / (xl - xk + PadicScalar::from_int(ctx_, i)).norm());
  return m;
}

PadicMatrix ShiftedCommutatorInverse::apply(const PadicMatrix& r, int i) const {
  return s_ * apply_adapted(sinv_ * r * s_, i) * sinv_;
}

PadicMatrix ShiftedCommutatorInverse::apply_adapted(const PadicMatrix& t0, int i) const {
  std::size_t n = t0.rows();
  PadicMatrix t = t0;
  PadicMatrix y(ctx_, n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) y(a, b) = PadicScalar::exact_zero(ctx_);
  std::vector<PadicScalar> cinv(xi_.size() * xi_.size());
  for (std::size_t l = 0; l < xi_.size(); ++l)
    for (std::size_t k = 0; k < xi_.size(); ++k) {
      PadicScalar c = xi_[l] - xi_[k] + PadicScalar::from_int(ctx_, i);
      if (c.is_zero()) throw Error(ErrorKind::resonance, "shifted commutator is singular at " + std::to_string(i));
      cinv[l * xi_.size() + k] = c.inverse();
    }
  PadicScalar sign = PadicScalar::from_int(ctx_, 1);
  std::vector<PadicScalar> power(cinv);  // c^-(s+1)
  for (int s = 0; s < e_; ++s) {
    if (t.is_zero()) break;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t key = block_of_[a] * xi_.size() + block_of_[b];
        y(a, b) += sign * power[key] * t(a, b);
      }
    for (std::size_t key = 0; key < power.size(); ++key) power[key] *= cinv[key];
    sign = -sign;
    t = nil_ * t - t * nil_;
  }
  return y;
}

FuchsResult solve_constant_form(const LogNablaModule& e, int j, int order) {
  if (j < 0 || j >= e.nvars()) throw Error(ErrorKind::invalid_argument, "variable index out of range");
  if (order < 1) throw Error(ErrorKind::invalid_argument, "order must be positive");
  const AlignedInterval& iv = e.intervals()[j];
  if (!iv.contains_zero() || !iv.upper) throw Error(ErrorKind::out_of_domain, "canonical extension needs a bounded disc");
  const SeriesMatrix& n = e.matrix(j);
  if (n.window().hi[j] < order)
    throw Error(ErrorKind::invalid_argument, "connection is determined only to degree " + std::to_string(n.window().hi[j]) +
                                                 " in t_" + std::to_string(j + 1));
  SeriesMatrix n0s = n.at_zero(j);
  if (!n0s.is_constant())
    throw Error(ErrorKind::invalid_argument, "residue along t_" + std::to_string(j + 1) + " depends on the other variables");
  const PadicContext& ctx = e.context();
  std::size_t mu = e.rank();

  FuchsResult res;
  res.variable = j;
  res.order = order;
  res.n0 = n0s.coefficient(MultiIndex{0, 0, 0});
  ShiftedCommutatorInverse inv(res.n0);
  inv.check_resonance(order);
  res.eigenvalues = inv.eigenvalues();

  // The recursion runs in the adapted basis so that precision is tracked per
  // block pair; M = S M' S^-1 at the end.
  const Window exact = Window::exact(e.nvars());
  const SeriesMatrix s = SeriesMatrix::from_constant(inv.adapted_basis(), exact);
  const SeriesMatrix sinv = SeriesMatrix::from_constant(inv.adapted_inverse(), exact);
  std::vector<SeriesMatrix> slices, adapted;
  for (int k = 0; k <= order; ++k) {
    slices.push_back(n.slice(j, k));
    adapted.push_back(sinv * slices.back() * s);
  }
  std::vector<SeriesMatrix> m{SeriesMatrix::identity(ctx, mu, exact)};
  for (int i = 1; i <= order; ++i) {
    SeriesMatrix r = -(adapted[i] * m[0]);
    for (int k = 1; k < i; ++k) r = r - adapted[i - k] * m[k];
    SeriesMatrix mi = map_coefficients(r, [&](const PadicMatrix& x) { return inv.apply_adapted(x, i); });
    if (mi.is_zero() && !r.is_zero())
      throw Error(ErrorKind::precision_exhausted, "no significant digits left at index " + std::to_string(i));
    m.push_back(mi);
  }
  for (auto& x : m) x = s * x * sinv;

  Window w = m.back().window().meet(m.front().window());
  for (const auto& x : m) {
    Window xw = x.window();
    for (int k = 0; k < e.nvars(); ++k) w.hi[k] = std::min(w.hi[k], xw.hi[k]);
  }
  w.lo = MultiIndex{0, 0, 0};
  w.hi[j] = order;
  SeriesMatrix g(ctx, mu, mu, w);
  for (int i = 0; i <= order; ++i)
    for (std::size_t a = 0; a < mu; ++a)
      for (std::size_t b = 0; b < mu; ++b)
        for (const auto& [idx, c] : m[i](a, b).terms()) {
          MultiIndex k = idx;
          k[j] = i;
          if (w.determined(k) && !c.is_exact_zero()) g(a, b).set(k, c);
        }
  res.gauge = g;

  std::vector<NormValue> radii = base_radii(e);
  for (const auto& x : m) res.coefficient_norms.push_back(x.rho_norm(radii));
  SeriesMatrix residual = n * g + g.log_derivative(j) - g * SeriesMatrix::from_constant(res.n0, Window::exact(e.nvars()));
  res.residual = residual.rho_norm(radii);

  FuchsConstants& c = res.constants;
  c.a = *iv.upper;
  c.e = inv.nilpotency();
  c.c_series = NormValue::zero();
  for (int i = 1; i <= order; ++i) c.c_series = max(c.c_series, slices[i].rho_norm(radii) * c.a.pow(Rational(i)));
  c.c_operator = max(inv.conditioning(), inv.conditioning() * inv.nilpotent_norm());
  c.c = max(NormValue::one(), max(c.c_series, c.c_operator));
  NormValue a_i = NormValue::one();
  c.rho_inv = NormValue::one();
  for (int i = 1; i <= order; ++i) {
    a_i = a_i * max(inv.max_inverse_factor(i), NormValue::one());
    c.a_partial.push_back(a_i);
    c.rho_inv = max(c.rho_inv, a_i.root(i));
  }
  return res;
}

RadiusBound radius_bound(const FuchsResult& r, const NormValue& a) {
  const FuchsConstants& c = r.constants;
  if (c.a_partial.empty()) throw Error(ErrorKind::invalid_argument, "result carries no bound constants");
  RadiusBound b;
  NormValue rho = NormValue::one() / c.rho_inv;
  b.certified_sup = rho.pow(Rational(c.e)) * c.c.pow(Rational(-2 * c.e)) * a;
  b.polynomial = true;
  for (int i = r.order / 2 + 1; i <= r.order; ++i) b.polynomial = b.polynomial && r.coefficient_norms[i].is_zero();
  NormValue step = NormValue::from_exponent(Rational(1, r.order));  // p^(-1/order)
  if (b.polynomial) {
    b.certified = a;
    b.empirical = a;
  } else {
    b.certified = min(a, b.certified_sup * step);
    b.empirical = a;
    for (int i = 1; i <= r.order; ++i)
      if (!r.coefficient_norms[i].is_zero()) b.empirical = min(b.empirical, r.coefficient_norms[i].root(i).pow(Rational(-1)));
  }
  b.sanity = NormValue::zero();
  for (int i = 0; i <= r.order; ++i) b.sanity = max(b.sanity, r.coefficient_norms[i] * b.certified.pow(Rational(i)));
  return b;
}

namespace {

ExtensionResult extend_over(const LogNablaModule& e, std::vector<int> vars, int order) {
  const PadicContext& ctx = e.context();
  ExtensionResult out;
  if (vars.empty()) {
    for (int j = 0; j < e.nvars(); ++j) {
      if (!e.matrix(j).is_constant())
        throw Error(ErrorKind::integrability, "matrix of t_" + std::to_string(j + 1) + " is not constant on the fixed locus");
      out.model.push_back(e.matrix(j).coefficient(MultiIndex{0, 0, 0}));
    }
    out.gauge = SeriesMatrix::identity(ctx, e.rank(), Window::exact(e.nvars()));
    out.descent_ok = true;
    return out;
  }
  int v = vars.back();
  vars.pop_back();
  std::vector<SeriesMatrix> restricted;
  for (int j = 0; j < e.nvars(); ++j) restricted.push_back(e.matrix(j).at_zero(v));
  Window rw = e.window();
  rw.lo[v] = 0;
  rw.hi[v] = kUnbounded;
  ExtensionResult sub = extend_over(LogNablaModule(ctx, e.rank(), e.intervals(), rw, restricted), vars, order);

  LogNablaModule e1 = sub.gauge.is_constant() && sub.gauge.coefficient(MultiIndex{0, 0, 0}).equals(PadicMatrix::identity(ctx, e.rank()))
                          ? e
                          : gauge_transform(e, sub.gauge);
  FuchsResult step = solve_constant_form(e1, v, order);
  LogNablaModule e2 = gauge_transform(e1, step.gauge);
  out.steps = sub.steps;
  out.steps.push_back(step);
  out.gauge = sub.gauge * step.gauge;
  for (int j = 0; j < e.nvars(); ++j) {
    const SeriesMatrix& l = e2.matrix(j);
    if (!l.is_constant())
      throw Error(ErrorKind::integrability, "matrix of t_" + std::to_string(j + 1) + " keeps a nonconstant tail after extending along t_" +
                                                std::to_string(v + 1));
  }
  for (int j = 0; j < e.nvars(); ++j) out.model.push_back(e2.matrix(j).coefficient(MultiIndex{0, 0, 0}));
  out.descent_ok = true;
  return out;
}

}  // namespace

ExtensionResult multivariable_extend(const LogNablaModule& e, int order) {
  if (!e.on_polydisc()) throw Error(ErrorKind::out_of_domain, "canonical extension needs a polydisc");
  std::vector<int> vars;
  for (int j = 0; j < e.nvars(); ++j) vars.push_back(j);
  return extend_over(e, vars, order);
}

}  // namespace lognabla
