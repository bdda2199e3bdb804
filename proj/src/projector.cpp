#include "lognabla/projector.hpp"

#include "lognabla/error.hpp"
#include "lognabla/fuchs.hpp"

#include <algorithm>
#include <sstream>

namespace lognabla {

std::string to_string(QChoice q) {
  switch (q) {
    case QChoice::one: return "one";
    case QChoice::kernel: return "kernel";
    case QChoice::eigenspace: return "eigenspace";
  }
  return "one";
}

namespace {

PadicScalar from_int(const PadicContext& ctx, std::int64_t n) { return PadicScalar::from_int(ctx, n); }

std::vector<MultiIndex> window_indices(const Window& w) {
  if (!w.bounded()) throw Error(ErrorKind::invalid_argument, "a bounded window is required");
  std::vector<MultiIndex> out;
  for_each_index(w, [&](const MultiIndex& i) { out.push_back(i); });
  return out;
}

// Rows indexed by (monomial, component); only determined monomials contribute.
PadicMatrix flatten(const SeriesMatrix& v, const std::vector<MultiIndex>& monomials) {
  const Window w = v.window();
  std::vector<MultiIndex> used;
  for (const auto& j : monomials)
    if (w.determined(j)) used.push_back(j);
  PadicMatrix out(v.context(), used.size() * v.rows(), v.cols());
  for (std::size_t k = 0; k < used.size(); ++k) {
    PadicMatrix c = v.coefficient(used[k]);
    out.set_block(k * v.rows(), 0, c);
  }
  return out;
}

SeriesMatrix times_constant(const SeriesMatrix& v, const PadicMatrix& c) {
  return v * SeriesMatrix::from_constant(c, Window::exact(v.nvars()));
}

std::vector<NormValue> radii_of(const LogNablaModule& e) {
  std::vector<NormValue> r;
  for (const auto& iv : e.intervals()) r.push_back(iv.upper ? *iv.upper : NormValue::one());
  return r;
}

NormValue column_max_norm(const SeriesMatrix& v, const std::vector<NormValue>& radii) {
  return v.cols() == 0 ? NormValue::zero() : v.rho_norm(radii);
}

// Canonical basis of the column span: identity on the first independent rows.
SeriesMatrix canonical_basis(const SeriesMatrix& s, const std::vector<MultiIndex>& monomials) {
  if (s.cols() == 0) return s;
  PadicMatrix f = flatten(s, monomials);
  std::vector<std::size_t> rows = independent_columns(f.transpose());
  if (rows.size() != s.cols()) throw Error(ErrorKind::internal_consistency, "section basis is dependent");
  PadicMatrix pivot(s.context(), rows.size(), s.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < s.cols(); ++c) pivot(r, c) = f(rows[r], c);
  return times_constant(s, inverse(pivot));
}

SeriesMatrix select_columns(const SeriesMatrix& s, const std::vector<std::size_t>& cols) {
  SeriesMatrix out(s.context(), s.rows(), cols.size(), s.window());
  for (std::size_t r = 0; r < s.rows(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = s(r, cols[c]);
  return out;
}

std::optional<std::int64_t> integer_difference(const PadicScalar& a, const PadicScalar& b, std::int64_t bound) {
  PadicScalar d = a - b;
  if (d.is_zero()) return 0;
  if (auto r = d.to_rational(); r && r->denominator() == 1 && std::abs(r->numerator()) <= bound) return r->numerator();
  return std::nullopt;
}

int window_extent(const Window& w) {
  int k = 0;
  for (int j = 0; j < w.n; ++j) k = std::max({k, std::abs(w.lo[j]), std::abs(w.hi[j])});
  return k;
}

}  // namespace

PadicPolynomial DlOperator::univariate() const {
  if (table.size() != 1) throw Error(ErrorKind::invalid_argument, "univariate form needs one variable");
  const ExponentRow& row = table[0];
  PadicContext ctx = row.xi.front().context();
  PadicPolynomial x = PadicPolynomial::linear_root(ctx, PadicScalar::exact_zero(ctx));
  PadicPolynomial d = q.empty() ? PadicPolynomial::constant(ctx, from_int(ctx, 1)) : q[0];
  for (int l = 1; l <= level; ++l)
    for (std::size_t k = 0; k < row.xi.size(); ++k) {
      PadicScalar diff = row.xi[0] - row.xi[k];
      PadicScalar lj = from_int(ctx, l);
      PadicPolynomial shifted = x - PadicPolynomial::constant(ctx, row.xi[k]);
      PadicPolynomial num = (PadicPolynomial::constant(ctx, lj) - shifted) * (PadicPolynomial::constant(ctx, lj) + shifted);
      PadicScalar den = (lj - diff) * (lj + diff);
      d = d * (num * den.inverse()).pow(m);
    }
  return d;
}

SeriesMatrix DlOperator::apply_q(const LogNablaModule& e, const SeriesMatrix& v) const {
  SeriesMatrix out = v;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& c = q[i].coeffs();
    if (c.empty()) return out * PadicScalar::exact_zero(v.context());
    SeriesMatrix acc = out * c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) acc = e.apply(static_cast<int>(i), acc) + out * c[k];
    out = acc;
  }
  return out;
}

SeriesMatrix DlOperator::step(const LogNablaModule& e, const SeriesMatrix& v, int l) const {
  const PadicContext& ctx = v.context();
  PadicScalar lj = from_int(ctx, l);
  SeriesMatrix w = v;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const ExponentRow& row = table[i];
    for (std::size_t k = 0; k < row.xi.size(); ++k) {
      PadicScalar diff = row.xi[0] - row.xi[k];
      PadicScalar scale = ((lj - diff) * (lj + diff)).inverse();
      for (int r = 0; r < m; ++r) {
        SeriesMatrix dw = e.apply(static_cast<int>(i), w);
        SeriesMatrix a = w * (lj + row.xi[k]) - dw;  // (l - (d - xi)) w
        SeriesMatrix da = e.apply(static_cast<int>(i), a);
        w = (a * (lj - row.xi[k]) + da) * scale;      // (l + (d - xi)) a
      }
    }
  }
  return w;
}

SeriesMatrix DlOperator::apply(const LogNablaModule& e, const SeriesMatrix& v) const {
  SeriesMatrix w = apply_q(e, v);
  for (int l = 1; l <= level; ++l) w = step(e, w, l);
  return w;
}

DlOperator build_dl(const std::vector<ExponentRow>& table, const std::vector<PadicScalar>& target, QChoice q, int l) {
  if (l < 0) throw Error(ErrorKind::invalid_argument, "level must be non-negative");
  if (target.size() != table.size()) throw Error(ErrorKind::shape_mismatch, "one target exponent per variable");
  DlOperator op;
  op.level = l;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const ExponentRow& row = table[i];
    if (row.xi.empty() || row.xi.size() != row.multiplicity.size())
      throw Error(ErrorKind::invalid_argument, "malformed exponent row");
    std::size_t k0 = row.xi.size();
    for (std::size_t k = 0; k < row.xi.size(); ++k)
      if (row.xi[k].equals(target[i])) k0 = k;
    if (k0 == row.xi.size()) throw Error(ErrorKind::invalid_argument, "target is not an exponent of variable " + std::to_string(i));
    ExponentRow r;
    r.xi.push_back(row.xi[k0]);
    r.multiplicity.push_back(row.multiplicity[k0]);
    for (std::size_t k = 0; k < row.xi.size(); ++k)
      if (k != k0) {
        r.xi.push_back(row.xi[k]);
        r.multiplicity.push_back(row.multiplicity[k]);
      }
    for (int mu : r.multiplicity) op.m = std::max(op.m, mu);
    const PadicContext ctx = r.xi[0].context();
    for (std::size_t k = 1; k < r.xi.size(); ++k) {
      PadicScalar diff = r.xi[0] - r.xi[k];
      for (int j = 1; j <= l; ++j) {
        PadicScalar jj = from_int(ctx, j);
        if ((jj - diff).is_zero() || (jj + diff).is_zero())
          throw Error(ErrorKind::resonance, "denominator vanishes at (variable " + std::to_string(i) + ", k " +
                                                std::to_string(k) + ", j " + std::to_string(j) + ")");
      }
    }
    PadicPolynomial qi = PadicPolynomial::constant(ctx, from_int(ctx, 1));
    if (q != QChoice::one) {
      if (q == QChoice::kernel) qi = qi * PadicPolynomial::linear_root(ctx, r.xi[0]).pow(r.multiplicity[0] - 1);
      for (std::size_t k = 1; k < r.xi.size(); ++k) qi = qi * PadicPolynomial::linear_root(ctx, r.xi[k]).pow(r.multiplicity[k]);
    }
    op.q.push_back(qi);
    op.table.push_back(std::move(r));
  }
  return op;
}

std::vector<ExponentRow> exponent_table(const LogNablaModule& e) {
  std::vector<ExponentRow> out;
  for (int j = 0; j < e.nvars(); ++j) {
    ExponentAnalysis a;
    if (e.intervals()[j].contains_zero()) {
      a = residue(e, j).analysis;
    } else if (e.matrix(j).is_constant()) {
      MultiIndex zero{0, 0, 0};
      a = analyze_exponents(e.matrix(j).coefficient(zero));
    } else {
      throw Error(ErrorKind::invalid_argument, "exponent table must be supplied for a non-constant module off the disc");
    }
    ExponentRow row;
    for (const auto& r : a.exponents) {
      row.xi.push_back(r.value);
      row.multiplicity.push_back(r.multiplicity);
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

SeriesMatrix default_probes(const LogNablaModule& e) {
  std::vector<MultiIndex> mons = window_indices(e.window());
  SeriesMatrix v(e.context(), e.rank(), mons.size() * e.rank(), e.window());
  PadicScalar one = from_int(e.context(), 1);
  for (std::size_t k = 0; k < mons.size(); ++k)
    for (std::size_t b = 0; b < e.rank(); ++b) v(b, k * e.rank() + b) = LaurentSeries::monomial(e.context(), e.window(), mons[k], one);
  return v;
}

NormValue default_eta(const PadicContext&, const NormValue& eta) {
  return eta.is_zero() ? NormValue::from_exponent(Rational(1, 2)) : eta;
}

// Exact kernel of (d_i - xi_i) on the span of the columns of s.
PadicMatrix horizontal_combinations(const LogNablaModule& e, const SeriesMatrix& s, const std::vector<PadicScalar>& xi,
                                    const std::vector<MultiIndex>& mons) {
  PadicMatrix stacked(e.context(), 0, s.cols());
  for (int i = 0; i < e.nvars(); ++i) {
    SeriesMatrix d = e.apply(i, s) - s * xi[static_cast<std::size_t>(i)];
    stacked = PadicMatrix::vconcat(stacked, flatten(d, mons));
  }
  if (stacked.rows() == 0) return PadicMatrix::identity(e.context(), s.cols());
  return kernel(stacked);
}

}  // namespace

HorizontalSpace horizontal_sections(const LogNablaModule& e, const std::vector<PadicScalar>& xi, const HorizontalOptions& opt) {
  if (static_cast<int>(xi.size()) != e.nvars()) throw Error(ErrorKind::shape_mismatch, "one target exponent per variable");
  if (opt.run < 1) throw Error(ErrorKind::invalid_argument, "run length must be positive");
  const PadicContext& ctx = e.context();
  std::vector<ExponentRow> table = opt.table ? *opt.table : exponent_table(e);
  std::vector<MultiIndex> mons = window_indices(e.window());
  const int extent = window_extent(e.window());

  HorizontalSpace out;
  out.xi = xi;
  out.intervals = e.intervals();
  out.run = opt.run;
  out.sections = SeriesMatrix(ctx, e.rank(), 0, e.window());

  for (std::size_t i = 0; i < table.size(); ++i) {
    bool found = false;
    for (const auto& x : table[i].xi) {
      auto d = integer_difference(xi[i], x, 2 * extent + 1);
      if (d && *d == 0) found = true;
    }
    if (found) continue;
    for (std::size_t k = 0; k < table[i].xi.size(); ++k)
      if (integer_difference(xi[i], table[i].xi[k], 2 * extent + 1))
        throw Error(ErrorKind::resonance, "target differs from exponent " + table[i].xi[k].to_string() + " of variable " +
                                              std::to_string(i) + " by an integer");
    out.note = "target is not an exponent of variable " + std::to_string(i);
    out.eta_report.verdict = Verdict::pass;
    out.eta_report.reason = "empty space";
    return out;
  }

  const int run = opt.run;
  const int l_max = opt.l_max >= 0 ? opt.l_max : extent + run;
  if (l_max < run) throw Error(ErrorKind::invalid_argument, "l_max must be at least the run length");
  out.l_max = l_max;
  DlOperator op = build_dl(table, xi, opt.q, l_max);

  SeriesMatrix probes = opt.probes ? *opt.probes : default_probes(e);
  out.probe_count = probes.cols();
  std::vector<NormValue> radii = radii_of(e);

  std::vector<SeriesMatrix> diffs;
  SeriesMatrix cur = op.apply_q(e, probes);
  SeriesMatrix first = cur;
  for (int l = 1; l <= l_max; ++l) {
    SeriesMatrix next = op.step(e, cur, l);
    diffs.push_back(next - cur);
    cur = std::move(next);
  }

  PadicMatrix stacked(ctx, 0, probes.cols());
  for (int l = l_max - run + 1; l <= l_max; ++l) stacked = PadicMatrix::vconcat(stacked, flatten(diffs[static_cast<std::size_t>(l - 1)], mons));
  PadicMatrix stable = stacked.rows() == 0 ? PadicMatrix::identity(ctx, probes.cols()) : kernel(stacked);
  out.stable_combinations = stable.cols();
  if (stable.cols() == 0) {
    std::ostringstream msg;
    msg << "no probe combination stabilized within l_max = " << l_max << "; last difference norm "
        << diffs.back().rho_norm(radii).to_string(ctx.p);
    throw Error(ErrorKind::inconclusive, msg.str());
  }

  std::vector<NormValue> norms;
  norms.push_back(column_max_norm(times_constant(first, stable), radii));
  for (const auto& d : diffs) norms.push_back(column_max_norm(times_constant(d, stable), radii));
  out.difference_norms.assign(norms.begin() + 1, norms.end());
  NormValue witness = max(NormValue::one(), column_max_norm(probes, radii));
  out.eta_report = eta_null_from_norms(norms, default_eta(ctx, opt.eta), witness);

  SeriesMatrix limits = times_constant(cur, stable);
  out.precision_loss = probes.min_precision() - cur.min_precision();
  if (cur.min_precision() < 1) {
    std::ostringstream msg;
    msg << "D_l up to l = " << l_max << " consumed the tracked precision (loss " << out.precision_loss << " digits, cap "
        << ctx.cap << ")";
    throw Error(ErrorKind::precision_exhausted, msg.str());
  }
  std::vector<std::size_t> indep = independent_columns(flatten(limits, mons));
  SeriesMatrix basis = select_columns(limits, indep);
  PadicMatrix comb = horizontal_combinations(e, basis, xi, mons);
  SeriesMatrix sections = times_constant(basis, comb);
  sections = canonical_basis(sections, mons);
  for (int i = 0; i < e.nvars(); ++i)
    if (!(e.apply(i, sections) - sections * xi[static_cast<std::size_t>(i)]).is_zero())
      throw Error(ErrorKind::internal_consistency, "extracted section is not horizontal");
  out.sections = sections;
  out.dimension = sections.cols();
  return out;
}

DlBoundReport dl_difference_bound(const LogNablaModule& e, const std::vector<PadicScalar>& xi, int l_lo, int l_hi,
                                  const NormValue& rho, const HorizontalOptions& opt) {
  if (l_lo < 1 || l_hi < l_lo) throw Error(ErrorKind::invalid_argument, "bad level range");
  const PadicContext& ctx = e.context();
  std::vector<ExponentRow> table = opt.table ? *opt.table : exponent_table(e);
  std::vector<PadicScalar> target = xi;
  if (target.empty())
    for (const auto& row : table) target.push_back(row.xi.front());
  DlOperator op = build_dl(table, target, opt.q, l_hi);
  SeriesMatrix probes = opt.probes ? *opt.probes : default_probes(e);
  std::vector<NormValue> radii(static_cast<std::size_t>(e.nvars()), rho);

  // |d_i - xi_ik| estimated on the orthogonal probe basis.
  DlBoundReport rep;
  NormValue c = NormValue::one();
  int factors = 0;
  for (std::size_t i = 0; i < op.table.size(); ++i) {
    const ExponentRow& row = op.table[i];
    factors += static_cast<int>(row.xi.size()) * op.m;
    for (std::size_t k = 0; k < row.xi.size(); ++k) {
      PadicScalar diff = row.xi[0] - row.xi[k];
      NormValue dn = diff.norm();
      c = max(c, dn * dn);
      SeriesMatrix x = e.apply(static_cast<int>(i), probes) - probes * row.xi[k];
      for (std::size_t col = 0; col < probes.cols(); ++col) {
        NormValue den = probes.block(0, col, probes.rows(), 1).rho_norm(radii);
        if (den.is_zero()) continue;
        NormValue ratio = x.block(0, col, x.rows(), 1).rho_norm(radii) / den;
        c = max(c, ratio * ratio);
      }
    }
  }
  rep.operator_constant = c;

  SeriesMatrix cur = op.apply_q(e, probes);
  for (int l = 1; l < l_lo; ++l) cur = op.step(e, cur, l);
  for (int l = l_lo; l <= l_hi; ++l) {
    SeriesMatrix next = op.step(e, cur, l);
    NormValue b = NormValue::zero();
    PadicScalar lj = from_int(ctx, l);
    for (const auto& row : op.table)
      for (const auto& x : row.xi) {
        PadicScalar diff = row.xi[0] - x;
        b = max(b, ((lj - diff) * (lj + diff)).inverse().norm());
      }
    b = b * c;
    rep.levels.push_back(l);
    rep.factor_bound.push_back(max(b, b.pow(Rational(factors))));
    rep.observed.push_back(column_max_norm(next - cur, radii));
    rep.previous.push_back(column_max_norm(cur, radii));
    cur = std::move(next);
  }
  return rep;
}

LogConvergenceReport log_convergence_check(const LogNablaModule& e, const NormValue& a_prime, const NormValue& eta, int index_bound) {
  if (index_bound < 1) throw Error(ErrorKind::invalid_argument, "index bound must be at least 1");
  if (a_prime.is_zero()) throw Error(ErrorKind::invalid_argument, "radius must be positive");
  const PadicContext& ctx = e.context();
  const int n = e.nvars();
  std::vector<NormValue> radii(static_cast<std::size_t>(n), a_prime);

  struct Node {
    MultiIndex index;
    int last;
    SeriesMatrix v;
  };
  std::vector<Node> level{{MultiIndex{0, 0, 0}, 0, SeriesMatrix::identity(ctx, e.rank(), e.window())}};
  LogConvergenceReport rep;
  rep.radius = a_prime;
  rep.index_bound = index_bound;
  rep.shell_norms.push_back(level.front().v.rho_norm(radii));
  for (int k = 1; k <= index_bound; ++k) {
    std::vector<Node> next;
    NormValue m = NormValue::zero();
    for (const Node& node : level)
      for (int j = node.last; j < n; ++j) {
        int ij = node.index[static_cast<std::size_t>(j)];
        SeriesMatrix w = (e.apply(j, node.v) - node.v * from_int(ctx, ij)) * from_int(ctx, ij + 1).inverse();
        m = max(m, w.rho_norm(radii));
        MultiIndex idx = node.index;
        ++idx[static_cast<std::size_t>(j)];
        next.push_back({idx, j, std::move(w)});
      }
    rep.shell_norms.push_back(m);
    level = std::move(next);
  }
  rep.eta_report = eta_null_from_norms(rep.shell_norms, eta, NormValue::one());
  return rep;
}

namespace {

std::optional<Rational> as_rational(const PadicScalar& x) {
  if (x.is_exact_zero()) return Rational(0);
  return x.to_rational();
}

void require_sigma(const LogNablaModule& e, const std::vector<std::vector<PadicScalar>>& sigma, const FiltrationOptions& opt) {
  if (static_cast<int>(sigma.size()) != e.nvars()) throw Error(ErrorKind::shape_mismatch, "one exponent set per variable");
  ExponentSet set;
  set.p = e.context().p;
  for (int j = 0; j < e.nvars(); ++j) {
    std::vector<ZpElement> row;
    for (const auto& x : sigma[static_cast<std::size_t>(j)]) {
      auto r = as_rational(x);
      if (!r) throw Error(ErrorKind::invalid_argument, "exponent set entries must be rational");
      row.emplace_back(*r);
    }
    set.per_variable.push_back(std::move(row));
    ResidueData rd = residue(e, j);
    for (const auto& root : rd.analysis.exponents) {
      bool in = std::any_of(sigma[static_cast<std::size_t>(j)].begin(), sigma[static_cast<std::size_t>(j)].end(),
                            [&](const PadicScalar& s) { return s.equals(root.value); });
      if (!in) throw Error(ErrorKind::invalid_argument, "exponent " + root.value.to_string() + " of variable " + std::to_string(j) + " is not in the exponent set");
    }
  }
  NidReport nid = nid_check(set, std::int64_t{1} << 20);
  if (nid.status == NidStatus::violated) {
    const NidWitness& w = nid.witnesses.front();
    throw Error(ErrorKind::resonance, "exponent set is not NID: variable " + std::to_string(w.variable) + " has difference " + std::to_string(w.difference));
  }
  (void)opt;
}

}  // namespace

Filtration unipotent_filtration(const LogNablaModule& e, const std::vector<std::vector<PadicScalar>>& sigma, const FiltrationOptions& opt) {
  if (!e.on_polydisc()) throw Error(ErrorKind::invalid_argument, "filtration requires a module on a polydisc");
  const PadicContext& ctx = e.context();
  require_sigma(e, sigma, opt);

  Filtration out;
  {
    ExponentSet set;
    set.p = ctx.p;
    for (const auto& row : sigma) {
      std::vector<ZpElement> r;
      for (const auto& x : row) r.emplace_back(*as_rational(x));
      set.per_variable.push_back(std::move(r));
    }
    out.nld = nld_certify(set, opt.nld_s_max);
    if (out.nld.suspect) throw Error(ErrorKind::inconclusive, "exponent set is not NLD-certified");
  }

  NormValue outer = NormValue::one();
  for (const auto& iv : e.intervals())
    if (iv.upper) outer = min(outer, *iv.upper);
  NormValue a_prime = opt.a_prime.is_zero() ? outer * NormValue::from_exponent(Rational(1, 2)) : opt.a_prime;
  if (opt.require_log_convergence) {
    for (const Rational& q : {Rational(1, 4), Rational(1, 2)}) {
      LogConvergenceReport lc = log_convergence_check(e, a_prime, NormValue::from_exponent(q), opt.log_index_bound);
      if (lc.eta_report.verdict != Verdict::pass)
        throw Error(ErrorKind::inconclusive, "log-convergence check did not pass: " + lc.eta_report.reason);
      out.log_convergence = lc;
    }
  }

  std::vector<MultiIndex> mons = window_indices(e.window());
  const std::size_t mu = e.rank();
  SeriesMatrix total = SeriesMatrix::identity(ctx, mu, e.window());
  LogNablaModule cur = e;
  std::size_t offset = 0;
  const MultiIndex zero{0, 0, 0};

  while (cur.rank() > 0) {
    std::vector<std::size_t> pick(sigma.size(), 0);
    std::optional<HorizontalSpace> found;
    std::ostringstream tried;
    while (true) {
      std::vector<PadicScalar> xi;
      for (std::size_t j = 0; j < sigma.size(); ++j) xi.push_back(sigma[j][pick[j]]);
      HorizontalSpace h = horizontal_sections(cur, xi, opt.horizontal);
      tried << " (";
      for (std::size_t j = 0; j < xi.size(); ++j) tried << (j ? "," : "") << xi[j].to_string();
      tried << "):" << h.dimension;
      if (h.dimension > 0) {
        found = std::move(h);
        break;
      }
      std::size_t j = 0;
      while (j < pick.size() && ++pick[j] == sigma[j].size()) pick[j++] = 0;
      if (j == pick.size()) break;
    }
    if (!found)
      throw Error(ErrorKind::extraction_stalled, "no horizontal section for any target at rank " + std::to_string(cur.rank()) + ";" + tried.str());

    const std::size_t r = cur.rank();
    const std::size_t d = found->dimension;
    PadicMatrix s0 = found->sections.coefficient(zero);
    std::vector<std::size_t> cols = independent_columns(PadicMatrix::hconcat(s0, PadicMatrix::identity(ctx, r)));
    if (cols.size() != r || cols[d - 1] != d - 1)
      throw Error(ErrorKind::extraction_stalled, "horizontal sections are dependent at the origin");
    SeriesMatrix adapt(ctx, r, r, cur.window());
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < d; ++b) adapt(a, b) = found->sections(a, b);
    for (std::size_t c = d; c < r; ++c) adapt(cols[c] - d, c) = LaurentSeries::constant(ctx, cur.window(), from_int(ctx, 1));

    LogNablaModule next = gauge_transform(cur, adapt);
    for (int i = 0; i < cur.nvars(); ++i) {
      const SeriesMatrix& m = next.matrix(i);
      SeriesMatrix top = m.block(0, 0, d, d);
      SeriesMatrix expect = SeriesMatrix::identity(ctx, d, m.window()) * found->xi[static_cast<std::size_t>(i)];
      if (!(top - expect).is_zero() || !m.block(d, 0, r - d, d).is_zero())
        throw Error(ErrorKind::internal_consistency, "adapted connection is not block triangular");
    }

    SeriesMatrix lift = SeriesMatrix::identity(ctx, mu, total.window());
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) lift(offset + a, offset + b) = adapt(a, b);
    total = total * lift;

    GradedPiece piece;
    piece.xi = found->xi;
    piece.dimension = d;
    piece.sections = total.block(0, offset, mu, d);
    out.pieces.push_back(std::move(piece));
    offset += d;

    std::vector<SeriesMatrix> quotient;
    for (const auto& m : next.matrices()) quotient.push_back(m.block(d, d, r - d, r - d));
    if (r == d) break;
    cur = LogNablaModule(ctx, r - d, cur.intervals(), next.window(), quotient);
  }

  out.adapted_basis = total;
  LogNablaModule adapted = gauge_transform(e, total);
  out.adapted_matrices = adapted.matrices();
  offset = 0;
  for (const auto& piece : out.pieces) {
    for (int i = 0; i < e.nvars(); ++i) {
      const SeriesMatrix& m = out.adapted_matrices[static_cast<std::size_t>(i)];
      SeriesMatrix diag = m.block(offset, offset, piece.dimension, piece.dimension);
      SeriesMatrix expect = SeriesMatrix::identity(ctx, piece.dimension, m.window()) * piece.xi[static_cast<std::size_t>(i)];
      if (!(diag - expect).is_zero() || !m.block(offset, 0, piece.dimension, offset).is_zero())
        throw Error(ErrorKind::internal_consistency, "graded piece is not constant");
    }
    offset += piece.dimension;
  }
  return out;
}

SubmoduleExtension extend_submodule(const LogNablaModule& e, const SeriesMatrix& f_sections, int order) {
  if (!e.on_polydisc()) throw Error(ErrorKind::invalid_argument, "extension requires a module on a polydisc");
  if (f_sections.rows() != e.rank()) throw Error(ErrorKind::shape_mismatch, "sections have wrong rank");
  const PadicContext& ctx = e.context();
  ExtensionResult ext = multivariable_extend(e, order);
  SeriesMatrix model_coords = ext.gauge.inverse() * f_sections;

  PadicMatrix all(ctx, e.rank(), 0);
  for (const auto& j : model_coords.support())
    if (model_coords.window().determined(j)) all = PadicMatrix::hconcat(all, model_coords.coefficient(j));
  std::vector<std::size_t> indep = independent_columns(all);
  if (indep.size() != f_sections.cols())
    throw Error(ErrorKind::not_expressible, "model coefficients span rank " + std::to_string(indep.size()) + ", expected " +
                                                std::to_string(f_sections.cols()));
  PadicMatrix h(ctx, e.rank(), indep.size());
  for (std::size_t c = 0; c < indep.size(); ++c) h.set_block(0, c, all.column(indep[c]));
  std::vector<std::size_t> rows = independent_columns(h.transpose());
  PadicMatrix pivot(ctx, rows.size(), h.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c) pivot(r, c) = h(rows[r], c);
  h = h * inverse(pivot);

  std::vector<PadicMatrix> induced;
  for (std::size_t j = 0; j < ext.model.size(); ++j) {
    PadicMatrix wh = ext.model[j] * h;
    PadicMatrix sel(ctx, rows.size(), h.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < h.cols(); ++c) sel(r, c) = wh(rows[r], c);
    if (!(h * sel).equals(wh)) throw Error(ErrorKind::not_expressible, "span is not stable under the model operators");
    induced.push_back(sel);
  }
  SubmoduleExtension out;
  out.model_basis = h;
  out.sections = ext.gauge * SeriesMatrix::from_constant(h, Window::exact(e.nvars()));
  out.sub = u_functor(ctx, induced, e.intervals(), e.window());
  return out;
}

}  // namespace lognabla
