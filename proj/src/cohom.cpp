#include "lognabla/cohom.hpp"

#include "lognabla/error.hpp"

#include <bit>
#include <sstream>

namespace lognabla {

namespace {

int sign_before(WedgeMask wedge, int l) { return std::popcount(wedge & ((1u << l) - 1u)) % 2 == 0 ? 1 : -1; }

std::vector<WedgeMask> masks_of_degree(int n, int k) {
  std::vector<WedgeMask> out;
  for (WedgeMask m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == k) out.push_back(m);
  return out;
}

std::vector<MultiIndex> indices(const Window& w) {
  if (!w.bounded()) throw Error(ErrorKind::invalid_argument, "a bounded window is required");
  std::vector<MultiIndex> out;
  for_each_index(w, [&](const MultiIndex& i) { out.push_back(i); });
  return out;
}

// Koszul differential C^k -> C^(k+1) of the commuting tuple a.
PadicMatrix koszul(const PadicContext& ctx, const std::vector<PadicMatrix>& a, std::size_t r, int k) {
  const int n = static_cast<int>(a.size());
  auto src = masks_of_degree(n, k);
  auto dst = masks_of_degree(n, k + 1);
  PadicMatrix m = PadicMatrix::zero(ctx, dst.size() * r, src.size() * r);
  for (std::size_t s = 0; s < src.size(); ++s)
    for (int l = 0; l < n; ++l) {
      if (src[s] & (1u << l)) continue;
      WedgeMask t = src[s] | (1u << l);
      std::size_t row = static_cast<std::size_t>(std::find(dst.begin(), dst.end(), t) - dst.begin());
      PadicMatrix block = a[static_cast<std::size_t>(l)] * PadicScalar::from_int(ctx, sign_before(src[s], l));
      m.set_block(row * r, s * r, block);
    }
  return m;
}

std::vector<PadicMatrix> shifted_ops(const PadicContext& ctx, const std::vector<PadicMatrix>& w, const MultiIndex& i) {
  std::vector<PadicMatrix> out;
  for (std::size_t l = 0; l < w.size(); ++l)
    out.push_back(w[l] + PadicMatrix::scalar(ctx, w[l].rows(), PadicScalar::from_int(ctx, i[l])));
  return out;
}

std::vector<std::size_t> koszul_dims(const PadicContext& ctx, const std::vector<PadicMatrix>& a, std::size_t r) {
  const int n = static_cast<int>(a.size());
  std::vector<std::size_t> ranks(static_cast<std::size_t>(n + 1), 0);
  for (int k = 0; k < n; ++k) ranks[static_cast<std::size_t>(k)] = rank(koszul(ctx, a, r, k));
  std::vector<std::size_t> dims;
  for (int k = 0; k <= n; ++k) {
    std::size_t size = masks_of_degree(n, k).size() * r;
    std::size_t out_rank = ranks[static_cast<std::size_t>(k)];
    std::size_t in_rank = k > 0 ? ranks[static_cast<std::size_t>(k - 1)] : 0;
    dims.push_back(size - out_rank - in_rank);
  }
  return dims;
}

}  // namespace

LogForm LogForm::monomial(const PadicContext& ctx, int n, std::size_t rank, const MultiIndex& i, WedgeMask wedge,
                          const PadicMatrix& coefficient) {
  LogForm f(ctx, n, rank);
  f.add({i, wedge}, coefficient);
  return f;
}

void LogForm::add(const FormKey& key, const PadicMatrix& v) {
  if (v.rows() != rank_ || v.cols() != 1) throw Error(ErrorKind::shape_mismatch, "form coefficient has wrong shape");
  auto it = terms_.find(key);
  if (it == terms_.end())
    terms_.emplace(key, v);
  else
    it->second += v;
}

LogForm LogForm::operator+(const LogForm& o) const {
  LogForm out = *this;
  for (const auto& [k, v] : o.terms_) out.add(k, v);
  return out;
}

LogForm LogForm::operator-(const LogForm& o) const {
  LogForm out = *this;
  for (const auto& [k, v] : o.terms_) out.add(k, -v);
  return out;
}

bool LogForm::is_zero() const {
  for (const auto& [k, v] : terms_)
    if (!v.is_zero()) return false;
  return true;
}

NormValue LogForm::norm() const {
  NormValue m = NormValue::zero();
  for (const auto& [k, v] : terms_) m = max(m, v.norm());
  return m;
}

LogDeRhamComplex::LogDeRhamComplex(const PadicContext& ctx, std::vector<PadicMatrix> operators, const Window& window)
    : ctx_(ctx), w_(std::move(operators)), window_(window) {
  if (static_cast<int>(w_.size()) != window.n) throw Error(ErrorKind::shape_mismatch, "one operator per variable");
  if (w_.empty()) throw Error(ErrorKind::invalid_argument, "at least one variable");
  rank_ = w_.front().rows();
  for (const auto& m : w_)
    if (!m.square() || m.rows() != rank_) throw Error(ErrorKind::shape_mismatch, "operators must be square of equal size");
  for (std::size_t a = 0; a < w_.size(); ++a)
    for (std::size_t b = a + 1; b < w_.size(); ++b)
      if (!(w_[a] * w_[b] - w_[b] * w_[a]).is_zero()) throw Error(ErrorKind::integrability, "operators do not commute");
  indices(window);
}

LogDeRhamComplex LogDeRhamComplex::twisted(const PadicContext& ctx, const std::vector<PadicScalar>& alpha, const Window& window) {
  std::vector<PadicMatrix> ops;
  for (const auto& a : alpha) ops.push_back(PadicMatrix::scalar(ctx, 1, a));
  return LogDeRhamComplex(ctx, ops, window);
}

LogForm LogDeRhamComplex::d(const LogForm& f) const {
  LogForm out(ctx_, nvars(), rank_);
  for (const auto& [key, v] : f.terms()) {
    for (int l = 0; l < nvars(); ++l) {
      if (key.wedge & (1u << l)) continue;
      PadicMatrix c = w_[static_cast<std::size_t>(l)] * v + v * PadicScalar::from_int(ctx_, key.index[l]);
      out.add({key.index, key.wedge | (1u << l)}, c * PadicScalar::from_int(ctx_, sign_before(key.wedge, l)));
    }
  }
  return out;
}

LogForm LogDeRhamComplex::phi(const LogForm& f) const {
  LogForm out(ctx_, nvars(), rank_);
  for (const auto& [key, v] : f.terms()) {
    int l = -1;
    for (int j = 0; j < nvars() && l < 0; ++j)
      if (key.index[j] != 0) l = j;
    if (l < 0 || !(key.wedge & (1u << l))) continue;
    PadicMatrix a = w_[static_cast<std::size_t>(l)] +
                    PadicMatrix::scalar(ctx_, rank_, PadicScalar::from_int(ctx_, key.index[l]));
    PadicMatrix inv;
    try {
      inv = inverse(a);
    } catch (const Error&) {
      throw Error(ErrorKind::resonance, "resonant denominator at (l " + std::to_string(l) + ", i_l " + std::to_string(key.index[l]) + ")");
    }
    PadicMatrix c = inv * v * PadicScalar::from_int(ctx_, sign_before(key.wedge, l));
    out.add({key.index, key.wedge & ~(1u << l)}, c);
  }
  return out;
}

LogForm LogDeRhamComplex::gh(const LogForm& f) const {
  LogForm out(ctx_, nvars(), rank_);
  const MultiIndex zero{0, 0, 0};
  for (const auto& [key, v] : f.terms())
    if (key.index == zero) out.add(key, v);
  return out;
}

HomotopyCheck LogDeRhamComplex::verify_homotopy(int bound) const {
  HomotopyCheck r;
  r.defect = NormValue::zero();
  const int n = nvars();
  for (const auto& i : indices(window_)) {
    int size = 0;
    for (int j = 0; j < n; ++j) size += std::abs(i[j]);
    if (bound >= 0 && size > bound) continue;
    for (WedgeMask m = 0; m < (1u << n); ++m)
      for (std::size_t b = 0; b < rank_; ++b) {
        PadicMatrix e = PadicMatrix::zero(ctx_, rank_, 1);
        e(b, 0) = PadicScalar::from_int(ctx_, 1);
        LogForm w = LogForm::monomial(ctx_, n, rank_, i, m, e);
        LogForm defect = phi(d(w)) + d(phi(w)) - (w - gh(w));
        ++r.monomials;
        if (!defect.is_zero()) {
          ++r.failures;
          r.defect = max(r.defect, defect.norm());
        }
      }
  }
  return r;
}

NormValue LogDeRhamComplex::phi_growth() const {
  NormValue g = NormValue::zero();
  for (const auto& i : indices(window_)) {
    int l = -1;
    for (int j = 0; j < nvars() && l < 0; ++j)
      if (i[j] != 0) l = j;
    if (l < 0) continue;
    PadicMatrix a = w_[static_cast<std::size_t>(l)] + PadicMatrix::scalar(ctx_, rank_, PadicScalar::from_int(ctx_, i[l]));
    try {
      g = max(g, inverse(a).norm());
    } catch (const Error&) {
      throw Error(ErrorKind::resonance, "resonant denominator at (l " + std::to_string(l) + ", i_l " + std::to_string(i[l]) + ")");
    }
  }
  return g;
}

std::vector<std::size_t> LogDeRhamComplex::model_dims() const { return koszul_dims(ctx_, w_, rank_); }

std::vector<std::vector<LogForm>> LogDeRhamComplex::model_representatives() const {
  const int n = nvars();
  std::vector<std::vector<LogForm>> reps;
  for (int k = 0; k <= n; ++k) {
    auto masks = masks_of_degree(n, k);
    std::size_t size = masks.size() * rank_;
    PadicMatrix ker = k < n ? kernel(koszul(ctx_, w_, rank_, k)) : PadicMatrix::identity(ctx_, size);
    PadicMatrix img = k > 0 ? koszul(ctx_, w_, rank_, k - 1) : PadicMatrix::zero(ctx_, size, 0);
    std::vector<std::size_t> cols = independent_columns(PadicMatrix::hconcat(img, ker));
    std::vector<LogForm> out;
    for (std::size_t c : cols) {
      if (c < img.cols()) continue;
      LogForm f(ctx_, n, rank_);
      for (std::size_t s = 0; s < masks.size(); ++s) {
        PadicMatrix v = ker.block(s * rank_, c - img.cols(), rank_, 1);
        if (!v.is_zero()) f.add({MultiIndex{0, 0, 0}, masks[s]}, v);
      }
      out.push_back(std::move(f));
    }
    reps.push_back(std::move(out));
  }
  return reps;
}

std::vector<std::size_t> LogDeRhamComplex::window_dims() const {
  std::vector<std::size_t> total(static_cast<std::size_t>(nvars() + 1), 0);
  for (const auto& i : indices(window_)) {
    auto dims = koszul_dims(ctx_, shifted_ops(ctx_, w_, i), rank_);
    for (std::size_t k = 0; k < dims.size(); ++k) total[k] += dims[k];
  }
  return total;
}

LogForm homotopy_phi(const LogForm& form, const std::vector<PadicScalar>& alpha) {
  if (form.rank() != 1) throw Error(ErrorKind::shape_mismatch, "twisted homotopy acts on rank-one forms");
  Window w = Window::box(form.nvars(), 0, 0);
  return LogDeRhamComplex::twisted(form.context(), alpha, w).phi(form);
}

CohomologyReport dr_cohomology(const LogDeRhamComplex& complex, int homotopy_bound) {
  CohomologyReport r;
  r.homotopy = complex.verify_homotopy(homotopy_bound);
  if (r.homotopy.failures > 0)
    throw Error(ErrorKind::internal_consistency, "homotopy identity fails on " + std::to_string(r.homotopy.failures) + " monomials");
  r.phi_growth = complex.phi_growth();
  r.dims = complex.window_dims();
  r.model_dims = complex.model_dims();
  r.representatives = complex.model_representatives();
  return r;
}

CohomologyReport dr_cohomology(const PadicContext& ctx, const std::vector<PadicScalar>& alpha,
                               const std::vector<AlignedInterval>& intervals, const Window& window, int homotopy_bound) {
  const int n = window.n;
  if (static_cast<int>(alpha.size()) != n || static_cast<int>(intervals.size()) != n)
    throw Error(ErrorKind::shape_mismatch, "one twist and one interval per variable");
  MultiIndex shift{0, 0, 0};
  std::vector<PadicScalar> reduced = alpha;
  Window moved = window;
  for (int j = 0; j < n; ++j) {
    intervals[static_cast<std::size_t>(j)].validate();
    if (intervals[static_cast<std::size_t>(j)].contains_zero() && window.lo[j] < 0)
      throw Error(ErrorKind::invalid_argument, "negative powers on a disc");
    auto q = alpha[static_cast<std::size_t>(j)].to_rational();
    if (alpha[static_cast<std::size_t>(j)].is_exact_zero()) q = Rational(0);
    if (q && q->denominator() == 1 && q->numerator() != 0) {
      int a = static_cast<int>(q->numerator());
      if (-a < window.lo[j] || -a > window.hi[j])
        throw Error(ErrorKind::invalid_argument, "integer twist " + std::to_string(a) + " moves the class outside the window");
      shift[j] = -a;
      reduced[static_cast<std::size_t>(j)] = PadicScalar::exact_zero(ctx);
      moved.lo[j] += a;
      moved.hi[j] += a;
    }
  }
  LogDeRhamComplex original = LogDeRhamComplex::twisted(ctx, alpha, window);
  LogDeRhamComplex model = LogDeRhamComplex::twisted(ctx, reduced, moved);
  CohomologyReport r = dr_cohomology(model, homotopy_bound);
  r.dims = original.window_dims();
  r.shift = shift;
  for (auto& degree : r.representatives)
    for (auto& f : degree) {
      LogForm moved_form(ctx, n, 1);
      for (const auto& [key, v] : f.terms()) {
        FormKey k = key;
        for (int j = 0; j < n; ++j) k.index[j] += shift[j];
        moved_form.add(k, v);
      }
      f = moved_form;
    }
  return r;
}

HomReport hom_space(const LogNablaModule& e, const LogNablaModule& f) {
  if (e.nvars() != f.nvars()) throw Error(ErrorKind::shape_mismatch, "modules over different numbers of variables");
  LogNablaModule h = hom(e, f);
  const PadicContext& ctx = h.context();
  std::vector<MultiIndex> mons = indices(h.window());
  const std::size_t r = h.rank();
  SeriesMatrix probes(ctx, r, mons.size() * r, h.window());
  for (std::size_t k = 0; k < mons.size(); ++k)
    for (std::size_t b = 0; b < r; ++b)
      probes(b, k * r + b) = LaurentSeries::monomial(ctx, h.window(), mons[k], PadicScalar::from_int(ctx, 1));
  PadicMatrix eq(ctx, 0, probes.cols());
  for (int j = 0; j < h.nvars(); ++j) {
    SeriesMatrix d = h.apply(j, probes);
    Window w = d.window();
    for (const auto& m : mons)
      if (w.determined(m)) eq = PadicMatrix::vconcat(eq, d.coefficient(m));
  }
  PadicMatrix ker = kernel(eq);
  HomReport out;
  out.dimension = ker.cols();
  const std::size_t re = e.rank(), rf = f.rank();
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    SeriesMatrix a(ctx, rf, re, h.window());
    for (std::size_t k = 0; k < mons.size(); ++k)
      for (std::size_t idx = 0; idx < r; ++idx) {
        const PadicScalar& x = ker(k * r + idx, c);
        if (!x.is_zero()) a(idx % rf, idx / rf).add_to(mons[k], x);
      }
    out.basis.push_back(std::move(a));
  }
  return out;
}

ExtComparison ext_compare(const std::vector<PadicMatrix>& e_model, const std::vector<PadicMatrix>& f_model,
                          const std::vector<AlignedInterval>& intervals, const Window& window, int homotopy_bound) {
  if (e_model.empty() || e_model.size() != f_model.size()) throw Error(ErrorKind::shape_mismatch, "model tuples must match");
  const PadicContext ctx = e_model.front().context();
  Window one = Window::box(window.n, 0, 0);
  LogNablaModule ue = u_functor(ctx, e_model, intervals, one);
  LogNablaModule uf = u_functor(ctx, f_model, intervals, one);
  LogNablaModule h = hom(ue, uf);
  std::vector<PadicMatrix> w;
  const MultiIndex zero{0, 0, 0};
  for (const auto& m : h.matrices()) w.push_back(m.coefficient(zero));

  ExtComparison out;
  // Ext^0 in the model is the simultaneous commutant.
  const std::size_t re = e_model.front().rows(), rf = f_model.front().rows();
  PadicMatrix eq(ctx, 0, re * rf);
  for (std::size_t j = 0; j < e_model.size(); ++j) {
    PadicMatrix a = PadicMatrix::kronecker(f_model[j], PadicMatrix::identity(ctx, re)) -
                    PadicMatrix::kronecker(PadicMatrix::identity(ctx, rf), e_model[j].transpose());
    eq = PadicMatrix::vconcat(eq, a);
  }
  out.model[0] = kernel(eq).cols();
  LogDeRhamComplex constant(ctx, w, one);
  out.model[1] = constant.model_dims()[1];
  if (constant.model_dims()[0] != out.model[0])
    throw Error(ErrorKind::internal_consistency, "commutant and Koszul H^0 disagree");

  for (int j = 0; j < window.n; ++j)
    if (intervals[static_cast<std::size_t>(j)].contains_zero() && window.lo[j] < 0)
      throw Error(ErrorKind::invalid_argument, "negative powers on a disc");
  LogDeRhamComplex annulus(ctx, w, window);
  out.annulus_report = dr_cohomology(annulus, homotopy_bound);
  out.annulus[0] = out.annulus_report.dims[0];
  out.annulus[1] = out.annulus_report.dims[1];
  out.equal = out.model == out.annulus;
  if (!out.equal) {
    std::ostringstream s;
    s << "model (" << out.model[0] << "," << out.model[1] << ") vs window (" << out.annulus[0] << "," << out.annulus[1] << ")";
    out.witness = s.str();
  }
  return out;
}

}  // namespace lognabla
