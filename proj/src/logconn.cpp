#include "lognabla/logconn.hpp"

#include "lognabla/error.hpp"

namespace lognabla {

namespace {

void require_same_shape(const LogNablaModule& e, const LogNablaModule& f) {
  if (!(e.context() == f.context())) throw Error(ErrorKind::shape_mismatch, "modules over different contexts");
  if (e.nvars() != f.nvars()) throw Error(ErrorKind::shape_mismatch, "modules with different variable counts");
  if (e.intervals() != f.intervals()) throw Error(ErrorKind::shape_mismatch, "modules on different intervals");
}

Window meet_hi(const Window& declared, const std::vector<SeriesMatrix>& ms) {
  Window w = declared;
  for (const auto& m : ms) {
    Window mw = m.window();
    for (int j = 0; j < w.n; ++j) w.hi[j] = std::min(w.hi[j], mw.hi[j]);
  }
  return w;
}

}  // namespace

LogNablaModule::LogNablaModule(const PadicContext& ctx, std::size_t rank, std::vector<AlignedInterval> intervals,
                               const Window& window, std::vector<SeriesMatrix> matrices)
    : ctx_(ctx), rank_(rank), intervals_(std::move(intervals)), window_(window), matrices_(std::move(matrices)) {
  const int n = window_.n;
  if (static_cast<int>(intervals_.size()) != n || static_cast<int>(matrices_.size()) != n)
    throw Error(ErrorKind::shape_mismatch, "need one interval and one matrix per variable");
  for (auto& iv : intervals_) iv.validate();
  for (auto& m : matrices_) {
    if (m.rows() != rank_ || m.cols() != rank_) throw Error(ErrorKind::shape_mismatch, "connection matrix must be rank x rank");
    if (m.nvars() != n) throw Error(ErrorKind::shape_mismatch, "connection matrix variable count");
    // Exact Laurent polynomials stay exact; truncating them would make
    // products with negative powers undetermined on annuli.
    bool exact = true;
    for (int j = 0; j < n; ++j) exact = exact && m.window().hi[j] >= kUnbounded;
    if (!exact) m = m.truncated(window_.hi);
  }
  for (int j = 0; j < n; ++j) {
    if (!intervals_[j].contains_zero()) continue;
    for (const auto& m : matrices_)
      for (std::size_t a = 0; a < rank_; ++a)
        for (std::size_t b = 0; b < rank_; ++b)
          for (const auto& [i, c] : m(a, b).terms())
            if (i[j] < 0 && !c.is_zero())
              throw Error(ErrorKind::invalid_argument, "negative power of t_" + std::to_string(j + 1) + " on a disc");
  }
}

bool LogNablaModule::on_polydisc() const {
  for (const auto& iv : intervals_)
    if (!iv.contains_zero()) return false;
  return true;
}

SeriesMatrix LogNablaModule::apply(int j, const SeriesMatrix& v) const {
  if (v.rows() != rank_) throw Error(ErrorKind::shape_mismatch, "section has wrong rank");
  return v.log_derivative(j) + matrix(j) * v;
}

bool LogNablaModule::is_integrable() const {
  for (int i = 0; i < nvars(); ++i)
    for (int j = i + 1; j < nvars(); ++j) {
      const SeriesMatrix& a = matrix(i);
      const SeriesMatrix& b = matrix(j);
      SeriesMatrix defect = b.log_derivative(i) - a.log_derivative(j) + a * b - b * a;
      if (!defect.is_zero()) return false;
    }
  return true;
}

ResidueData residue(const LogNablaModule& e, int j, int search_depth) {
  if (j < 0 || j >= e.nvars()) throw Error(ErrorKind::invalid_argument, "variable index out of range");
  if (!e.intervals()[j].contains_zero())
    throw Error(ErrorKind::out_of_domain, "interval of t_" + std::to_string(j + 1) + " does not contain 0");
  ResidueData r;
  r.variable = j;
  r.residue = e.matrix(j).at_zero(j);
  r.constant = r.residue.is_constant();
  r.at_origin = r.residue.coefficient(MultiIndex{0, 0, 0});
  r.analysis = analyze_exponents(r.at_origin, search_depth);
  return r;
}

LogNablaModule make_m_xi(const PadicContext& ctx, const std::vector<PadicScalar>& xi,
                         const std::vector<AlignedInterval>& intervals, const Window& window) {
  std::vector<PadicMatrix> ops;
  for (const auto& x : xi) ops.push_back(PadicMatrix::scalar(ctx, 1, x));
  return u_functor(ctx, ops, intervals, window);
}

LogNablaModule u_functor(const PadicContext& ctx, const std::vector<PadicMatrix>& ops,
                         const std::vector<AlignedInterval>& intervals, const Window& window) {
  if (ops.empty()) throw Error(ErrorKind::invalid_argument, "no operators given");
  std::size_t mu = ops.front().rows();
  for (std::size_t a = 0; a < ops.size(); ++a) {
    if (ops[a].rows() != mu || ops[a].cols() != mu) throw Error(ErrorKind::shape_mismatch, "operators must be square of equal size");
    for (std::size_t b = a + 1; b < ops.size(); ++b)
      if (!(ops[a] * ops[b]).equals(ops[b] * ops[a]))
        throw Error(ErrorKind::integrability, "operators " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                                                  " do not commute");
  }
  Window exact = Window::exact(window.n);
  std::vector<SeriesMatrix> ms;
  for (const auto& m : ops) ms.push_back(SeriesMatrix::from_constant(m, exact));
  return LogNablaModule(ctx, mu, intervals, window, ms);
}

LogNablaModule gauge_transform(const LogNablaModule& e, const SeriesMatrix& g) {
  if (g.rows() != e.rank() || g.cols() != e.rank()) throw Error(ErrorKind::shape_mismatch, "gauge must be rank x rank");
  SeriesMatrix ginv = g.inverse();
  std::vector<SeriesMatrix> ms;
  for (int j = 0; j < e.nvars(); ++j) ms.push_back(ginv * (e.matrix(j) * g + g.log_derivative(j)));
  return LogNablaModule(e.context(), e.rank(), e.intervals(), meet_hi(e.window(), ms), ms);
}

LogNablaModule tensor(const LogNablaModule& e, const LogNablaModule& f) {
  require_same_shape(e, f);
  Window exact = Window::exact(e.nvars());
  SeriesMatrix ie = SeriesMatrix::identity(e.context(), e.rank(), exact);
  SeriesMatrix iff = SeriesMatrix::identity(e.context(), f.rank(), exact);
  std::vector<SeriesMatrix> ms;
  for (int j = 0; j < e.nvars(); ++j)
    ms.push_back(SeriesMatrix::kronecker(e.matrix(j), iff) + SeriesMatrix::kronecker(ie, f.matrix(j)));
  Window w = e.window();
  for (int j = 0; j < w.n; ++j) w.hi[j] = std::min(e.window().hi[j], f.window().hi[j]);
  return LogNablaModule(e.context(), e.rank() * f.rank(), e.intervals(), meet_hi(w, ms), ms);
}

LogNablaModule dual(const LogNablaModule& e) {
  std::vector<SeriesMatrix> ms;
  for (int j = 0; j < e.nvars(); ++j) ms.push_back(-e.matrix(j).transpose());
  return LogNablaModule(e.context(), e.rank(), e.intervals(), e.window(), ms);
}

LogNablaModule hom(const LogNablaModule& e, const LogNablaModule& f) { return tensor(dual(e), f); }

LogNablaModule module_algebra(const LogNablaModule& e, const LogNablaModule& f, ModuleOp op) {
  switch (op) {
    case ModuleOp::tensor: return tensor(e, f);
    case ModuleOp::dual: return dual(e);
    case ModuleOp::hom: return hom(e, f);
  }
  throw Error(ErrorKind::invalid_argument, "unknown module operation");
}

LogNablaModule direct_sum(const LogNablaModule& e, const LogNablaModule& f) {
  require_same_shape(e, f);
  std::size_t m = e.rank(), n = f.rank();
  std::vector<SeriesMatrix> ms;
  for (int j = 0; j < e.nvars(); ++j) {
    SeriesMatrix s(e.context(), m + n, m + n, Window::exact(e.nvars()));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) s(a, b) = e.matrix(j)(a, b);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) s(m + a, m + b) = f.matrix(j)(a, b);
    ms.push_back(s);
  }
  Window w = e.window();
  for (int j = 0; j < w.n; ++j) w.hi[j] = std::min(e.window().hi[j], f.window().hi[j]);
  return LogNablaModule(e.context(), m + n, e.intervals(), w, ms);
}

}  // namespace lognabla
