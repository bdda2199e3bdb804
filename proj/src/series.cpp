#include "lognabla/series.hpp"

#include "lognabla/error.hpp"

#include <algorithm>
#include <climits>

namespace lognabla {

namespace {

int sat_add(int a, int b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  long long s = static_cast<long long>(a) + b;
  return static_cast<int>(std::min<long long>(s, kUnbounded));
}

void require_compatible(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.nvars() != b.nvars()) throw Error(ErrorKind::shape_mismatch, "series with different variable counts");
}

}  // namespace

int total_degree(const MultiIndex& i, int n) {
  int s = 0;
  for (int j = 0; j < n; ++j) s += i[j];
  return s;
}

std::string to_string(const MultiIndex& i, int n) {
  std::string s = "(";
  for (int j = 0; j < n; ++j) s += (j ? "," : "") + std::to_string(i[j]);
  return s + ")";
}

// ------------------------------------------------------------------ Window

Window Window::box(int n, int lo, int hi) {
  if (n < 1 || n > kMaxVars) throw Error(ErrorKind::invalid_argument, "variable count must be 1.." + std::to_string(kMaxVars));
  Window w;
  w.n = n;
  for (int j = 0; j < kMaxVars; ++j) {
    w.lo[j] = j < n ? lo : 0;
    w.hi[j] = j < n ? hi : 0;
  }
  return w;
}

Window Window::exact(int n, int lo) {
  Window w = box(n, lo, 0);
  for (int j = 0; j < n; ++j) w.hi[j] = kUnbounded;
  return w;
}

bool Window::operator==(const Window& o) const {
  if (n != o.n) return false;
  for (int j = 0; j < n; ++j)
    if (lo[j] != o.lo[j] || hi[j] != o.hi[j]) return false;
  return true;
}

bool Window::contains(const MultiIndex& i) const {
  for (int j = 0; j < n; ++j)
    if (i[j] < lo[j] || i[j] > hi[j]) return false;
  return true;
}

bool Window::determined(const MultiIndex& i) const {
  for (int j = 0; j < n; ++j)
    if (i[j] > hi[j]) return false;
  return true;
}

bool Window::bounded() const {
  for (int j = 0; j < n; ++j)
    if (hi[j] >= kUnbounded) return false;
  return true;
}

Window Window::meet(const Window& o) const {
  if (n != o.n) throw Error(ErrorKind::shape_mismatch, "windows with different variable counts");
  Window w = *this;
  for (int j = 0; j < n; ++j) {
    w.lo[j] = std::min(lo[j], o.lo[j]);
    w.hi[j] = std::min(hi[j], o.hi[j]);
  }
  return w;
}

std::size_t Window::size() const {
  if (!bounded()) throw Error(ErrorKind::invalid_argument, "size of an unbounded window");
  std::size_t s = 1;
  for (int j = 0; j < n; ++j) s *= static_cast<std::size_t>(std::max(0, hi[j] - lo[j] + 1));
  return s;
}

void for_each_index(const Window& w, const std::function<void(const MultiIndex&)>& f) {
  if (!w.bounded()) throw Error(ErrorKind::invalid_argument, "cannot enumerate an unbounded window");
  for (int j = 0; j < w.n; ++j)
    if (w.hi[j] < w.lo[j]) return;
  MultiIndex i{0, 0, 0};
  for (int j = 0; j < w.n; ++j) i[j] = w.lo[j];
  while (true) {
    f(i);
    int j = w.n - 1;
    while (j >= 0 && i[j] == w.hi[j]) {
      i[j] = w.lo[j];
      --j;
    }
    if (j < 0) return;
    ++i[j];
  }
}

// --------------------------------------------------------- AlignedInterval

AlignedInterval AlignedInterval::disc(const NormValue& a, bool closed) {
  AlignedInterval i;
  i.lower = NormValue::zero();
  i.lower_closed = true;
  i.upper = a;
  i.upper_closed = closed;
  i.validate();
  return i;
}

AlignedInterval AlignedInterval::annulus(const NormValue& b, const NormValue& c, bool lower_closed, bool upper_closed) {
  AlignedInterval i;
  i.lower = b;
  i.upper = c;
  i.lower_closed = lower_closed;
  i.upper_closed = upper_closed;
  i.validate();
  return i;
}

bool AlignedInterval::contains(const NormValue& r) const {
  if (lower_closed ? r < lower : r <= lower) return false;
  if (!upper) return true;
  return upper_closed ? r <= *upper : r < *upper;
}

void AlignedInterval::validate() const {
  if (!upper && upper_closed) throw Error(ErrorKind::invalid_argument, "interval closed at +infinity");
  if (upper && *upper < lower) throw Error(ErrorKind::invalid_argument, "interval lower endpoint exceeds upper");
  if (upper && *upper == lower && !(lower_closed && upper_closed))
    throw Error(ErrorKind::invalid_argument, "empty interval");
}

bool AlignedInterval::operator==(const AlignedInterval& o) const {
  return lower == o.lower && upper == o.upper && lower_closed == o.lower_closed && upper_closed == o.upper_closed;
}

// ----------------------------------------------------------- LaurentSeries

LaurentSeries::LaurentSeries(const PadicContext& ctx, const Window& w) : ctx_(ctx), w_(w) {}

LaurentSeries LaurentSeries::constant(const PadicContext& ctx, const Window& w, const PadicScalar& c) {
  return monomial(ctx, w, MultiIndex{0, 0, 0}, c);
}

LaurentSeries LaurentSeries::monomial(const PadicContext& ctx, const Window& w, const MultiIndex& i,
                                      const PadicScalar& c) {
  LaurentSeries s(ctx, w);
  if (w.determined(i)) s.set(i, c);
  return s;
}

PadicScalar LaurentSeries::coefficient(const MultiIndex& i) const {
  for (int j = 0; j < w_.n; ++j) {
    if (i[j] < w_.lo[j]) return PadicScalar::exact_zero(ctx_);
    if (i[j] > w_.hi[j]) throw Error(ErrorKind::out_of_domain, "coefficient " + to_string(i, w_.n) + " is undetermined");
  }
  auto it = terms_.find(i);
  return it == terms_.end() ? PadicScalar::exact_zero(ctx_) : it->second;
}

void LaurentSeries::set(const MultiIndex& i, const PadicScalar& c) {
  if (!w_.determined(i)) throw Error(ErrorKind::out_of_domain, "index " + to_string(i, w_.n) + " beyond window");
  for (int j = 0; j < w_.n; ++j) w_.lo[j] = std::min(w_.lo[j], i[j]);
  if (c.is_exact_zero())
    terms_.erase(i);
  else
    terms_[i] = c;
}

void LaurentSeries::add_to(const MultiIndex& i, const PadicScalar& c) {
  if (c.is_exact_zero()) return;
  auto it = terms_.find(i);
  if (it == terms_.end()) {
    set(i, c);
  } else {
    it->second += c;
    if (it->second.is_exact_zero()) terms_.erase(it);
  }
}

MultiIndex LaurentSeries::effective_lo() const {
  MultiIndex e = w_.lo;
  for (int j = 0; j < w_.n; ++j) {
    int supp = INT_MAX;
    for (const auto& [i, c] : terms_)
      if (!c.is_zero()) supp = std::min(supp, i[j]);
    bool other_bounded = false;
    for (int i = 0; i < w_.n; ++i)
      if (i != j && w_.hi[i] < kUnbounded) other_bounded = true;
    int unknown = other_bounded ? w_.lo[j] : (w_.hi[j] >= kUnbounded ? kUnbounded : w_.hi[j] + 1);
    e[j] = std::max(w_.lo[j], std::min(supp, unknown));
  }
  return e;
}

void LaurentSeries::canonicalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_exact_zero() || !w_.determined(it->first))
      it = terms_.erase(it);
    else
      ++it;
  }
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
  require_compatible(*this, o);
  LaurentSeries r(ctx_, w_.meet(o.w_));
  r.terms_ = terms_;
  for (const auto& [i, c] : o.terms_) {
    auto it = r.terms_.find(i);
    if (it == r.terms_.end())
      r.terms_.emplace(i, c);
    else
      it->second += c;
  }
  r.canonicalize();
  return r;
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r = *this;
  for (auto& [i, c] : r.terms_) c = -c;
  return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const { return *this + (-o); }

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
  require_compatible(*this, o);
  MultiIndex ea = effective_lo(), eb = o.effective_lo();
  Window w;
  w.n = w_.n;
  for (int j = 0; j < kMaxVars; ++j) {
    if (j >= w_.n) {
      w.lo[j] = w.hi[j] = 0;
      continue;
    }
    w.hi[j] = std::min(sat_add(w_.hi[j], eb[j]), sat_add(o.w_.hi[j], ea[j]));
    int lo = sat_add(ea[j], eb[j]);
    if (lo >= kUnbounded) lo = std::min(sat_add(w_.lo[j], o.w_.lo[j]), w.hi[j]);
    if (w.hi[j] < kUnbounded) lo = std::min(lo, w.hi[j]);
    w.lo[j] = lo;
  }
  LaurentSeries r(ctx_, w);
  for (const auto& [i, a] : terms_) {
    if (a.is_exact_zero()) continue;
    for (const auto& [k, b] : o.terms_) {
      if (b.is_exact_zero()) continue;
      MultiIndex s;
      for (int j = 0; j < kMaxVars; ++j) s[j] = i[j] + k[j];
      if (!w.determined(s)) continue;
      auto it = r.terms_.find(s);
      if (it == r.terms_.end())
        r.terms_.emplace(s, a * b);
      else
        it->second += a * b;
    }
  }
  r.canonicalize();
  return r;
}

LaurentSeries LaurentSeries::operator*(const PadicScalar& c) const {
  LaurentSeries r = *this;
  for (auto& [i, x] : r.terms_) x *= c;
  r.canonicalize();
  return r;
}

LaurentSeries LaurentSeries::log_derivative(int j) const {
  LaurentSeries r(ctx_, w_);
  for (const auto& [i, c] : terms_)
    if (i[j] != 0) r.terms_.emplace(i, static_cast<std::int64_t>(i[j]) * c);
  return r;
}

LaurentSeries LaurentSeries::derivative(int j) const {
  Window w = w_;
  w.lo[j] = w_.lo[j] - 1;
  w.hi[j] = w_.hi[j] >= kUnbounded ? kUnbounded : w_.hi[j] - 1;
  LaurentSeries r(ctx_, w);
  for (const auto& [i, c] : terms_)
    if (i[j] != 0) {
      MultiIndex k = i;
      --k[j];
      r.terms_.emplace(k, static_cast<std::int64_t>(i[j]) * c);
    }
  return r;
}

LaurentSeries LaurentSeries::at_zero(int j) const { return slice(j, 0); }

LaurentSeries LaurentSeries::slice(int j, int d) const {
  if (d > w_.hi[j]) throw Error(ErrorKind::out_of_domain, "slice t_" + std::to_string(j + 1) + "^" + std::to_string(d) + " is undetermined");
  if (d == 0)
    for (const auto& [i, c] : terms_)
      if (i[j] < 0 && !c.is_zero()) throw Error(ErrorKind::out_of_domain, "negative powers present at t = 0");
  Window w = w_;
  w.lo[j] = 0;
  w.hi[j] = kUnbounded;
  LaurentSeries r(ctx_, w);
  for (const auto& [i, c] : terms_)
    if (i[j] == d) {
      MultiIndex k = i;
      k[j] = 0;
      r.terms_.emplace(k, c);
    }
  return r;
}

LaurentSeries LaurentSeries::shifted(const MultiIndex& shift) const {
  Window w = w_;
  for (int j = 0; j < w_.n; ++j) {
    w.lo[j] = w_.lo[j] + shift[j];
    w.hi[j] = w_.hi[j] >= kUnbounded ? kUnbounded : w_.hi[j] + shift[j];
  }
  LaurentSeries r(ctx_, w);
  for (const auto& [i, c] : terms_) {
    MultiIndex k = i;
    for (int j = 0; j < w_.n; ++j) k[j] += shift[j];
    r.terms_.emplace(k, c);
  }
  return r;
}

LaurentSeries LaurentSeries::truncated(const MultiIndex& hi) const {
  LaurentSeries r = *this;
  for (int j = 0; j < w_.n; ++j) r.w_.hi[j] = std::min(w_.hi[j], hi[j]);
  r.canonicalize();
  return r;
}

LaurentSeries LaurentSeries::inverse() const {
  MultiIndex e = effective_lo();
  auto it = terms_.find(e);
  if (it == terms_.end() || it->second.is_zero())
    throw Error(ErrorKind::not_invertible, "series has no invertible leading corner coefficient");
  PadicScalar cinv = it->second.inverse();
  MultiIndex neg{0, 0, 0};
  for (int j = 0; j < w_.n; ++j) neg[j] = -e[j];
  LaurentSeries g = shifted(neg) * cinv;  // 1 + h with h supported away from 0
  LaurentSeries h = g - constant(ctx_, Window::exact(w_.n), PadicScalar::from_int(ctx_, 1));
  LaurentSeries sum = constant(ctx_, g.w_, PadicScalar::from_int(ctx_, 1));
  if (!h.is_zero()) {
    int bound = 2;
    for (int j = 0; j < w_.n; ++j)
      if (g.w_.hi[j] < kUnbounded) bound += g.w_.hi[j];
    for (const auto& [i, c] : h.terms_) {
      bool raises = false;
      for (int j = 0; j < w_.n; ++j) raises = raises || (g.w_.hi[j] < kUnbounded && i[j] > 0);
      if (!raises && !c.is_zero()) throw Error(ErrorKind::not_invertible, "inverse needs a bounded window");
    }
    LaurentSeries term = sum;
    LaurentSeries mh = -h;
    for (int k = 1; k <= bound; ++k) {
      term = term * mh;
      if (term.terms_.empty()) break;
      sum = sum + term;
    }
  }
  LaurentSeries r = sum.shifted(neg) * cinv;
  // The determined range of 1/f ends where that of 1 + h does, shifted by -e.
  return r;
}

NormValue LaurentSeries::rho_norm(const std::vector<NormValue>& radii) const {
  if (static_cast<int>(radii.size()) < w_.n) throw Error(ErrorKind::invalid_argument, "one radius per variable required");
  for (int j = 0; j < w_.n; ++j)
    if (w_.hi[j] < w_.lo[j]) throw Error(ErrorKind::invalid_argument, "norm over an empty window");
  NormValue m = NormValue::zero();
  for (const auto& [i, c] : terms_) {
    if (c.is_zero()) continue;
    NormValue v = c.norm();
    for (int j = 0; j < w_.n; ++j) {
      if (i[j] == 0) continue;
      if (radii[j].is_zero()) {
        if (i[j] < 0) throw Error(ErrorKind::out_of_domain, "negative power evaluated at radius 0");
        v = NormValue::zero();
        break;
      }
      v = v * radii[j].pow(Rational(i[j]));
    }
    m = max(m, v);
  }
  return m;
}

bool LaurentSeries::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

bool LaurentSeries::is_constant() const {
  for (const auto& [i, c] : terms_) {
    if (c.is_zero()) continue;
    for (int j = 0; j < w_.n; ++j)
      if (i[j] != 0) return false;
  }
  return true;
}

std::int64_t LaurentSeries::min_precision() const {
  std::int64_t m = PadicScalar::kInfinite;
  for (const auto& [i, c] : terms_) m = std::min(m, c.precision());
  return m;
}

// ------------------------------------------------------------ SeriesMatrix

SeriesMatrix::SeriesMatrix(const PadicContext& ctx, std::size_t rows, std::size_t cols, const Window& w)
    : ctx_(ctx), rows_(rows), cols_(cols), e_(rows * cols, LaurentSeries(ctx, w)) {}

SeriesMatrix SeriesMatrix::identity(const PadicContext& ctx, std::size_t n, const Window& w) {
  return from_constant(PadicMatrix::identity(ctx, n), w);
}

SeriesMatrix SeriesMatrix::from_constant(const PadicMatrix& m, const Window& w) {
  SeriesMatrix r(m.context(), m.rows(), m.cols(), w);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = LaurentSeries::constant(m.context(), w, m(i, j));
  return r;
}

int SeriesMatrix::nvars() const { return e_.empty() ? 1 : e_.front().nvars(); }

SeriesMatrix SeriesMatrix::operator+(const SeriesMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::shape_mismatch, "series matrix sum");
  SeriesMatrix r = *this;
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
  return r;
}

SeriesMatrix SeriesMatrix::operator-() const {
  SeriesMatrix r = *this;
  for (auto& x : r.e_) x = -x;
  return r;
}

SeriesMatrix SeriesMatrix::operator-(const SeriesMatrix& o) const { return *this + (-o); }

SeriesMatrix SeriesMatrix::operator*(const SeriesMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::shape_mismatch, "series matrix product inner dimensions");
  SeriesMatrix r(ctx_, rows_, o.cols_, Window::exact(nvars()));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) {
      LaurentSeries acc = (*this)(i, 0) * o(0, j);
      for (std::size_t k = 1; k < cols_; ++k) acc = acc + (*this)(i, k) * o(k, j);
      r(i, j) = std::move(acc);
    }
  return r;
}

SeriesMatrix SeriesMatrix::operator*(const PadicScalar& c) const {
  SeriesMatrix r = *this;
  for (auto& x : r.e_) x = x * c;
  return r;
}

SeriesMatrix SeriesMatrix::log_derivative(int j) const {
  SeriesMatrix r = *this;
  for (auto& x : r.e_) x = x.log_derivative(j);
  return r;
}

SeriesMatrix SeriesMatrix::at_zero(int j) const {
  SeriesMatrix r = *this;
  for (auto& x : r.e_) x = x.at_zero(j);
  return r;
}

SeriesMatrix SeriesMatrix::slice(int j, int d) const {
  SeriesMatrix r = *this;
  for (auto& x : r.e_) x = x.slice(j, d);
  return r;
}

SeriesMatrix SeriesMatrix::truncated(const MultiIndex& hi) const {
  SeriesMatrix r = *this;
  for (auto& x : r.e_) x = x.truncated(hi);
  return r;
}

SeriesMatrix SeriesMatrix::transpose() const {
  SeriesMatrix r(ctx_, cols_, rows_, Window::exact(nvars()));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

SeriesMatrix SeriesMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::shape_mismatch, "block out of range");
  SeriesMatrix r(ctx_, nr, nc, Window::exact(nvars()));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

SeriesMatrix SeriesMatrix::kronecker(const SeriesMatrix& a, const SeriesMatrix& b) {
  SeriesMatrix r(a.ctx_, a.rows_ * b.rows_, a.cols_ * b.cols_, Window::exact(a.nvars()));
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j)
      for (std::size_t k = 0; k < b.rows_; ++k)
        for (std::size_t l = 0; l < b.cols_; ++l) r(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
  return r;
}

PadicMatrix SeriesMatrix::coefficient(const MultiIndex& i) const {
  PadicMatrix m(ctx_, rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).coefficient(i);
  return m;
}

std::vector<MultiIndex> SeriesMatrix::support() const {
  std::vector<MultiIndex> s;
  for (const auto& x : e_)
    for (const auto& [i, c] : x.terms()) s.push_back(i);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

SeriesMatrix SeriesMatrix::inverse() const {
  if (rows_ != cols_) throw Error(ErrorKind::shape_mismatch, "inverse of a non-square series matrix");
  if (rows_ == 1) {
    SeriesMatrix r = *this;
    r(0, 0) = (*this)(0, 0).inverse();
    return r;
  }
  int n = nvars();
  for (const auto& x : e_) {
    MultiIndex e = x.effective_lo();
    for (int j = 0; j < n; ++j)
      if (e[j] < 0) throw Error(ErrorKind::not_invertible, "matrix inverse with negative powers is unsupported");
  }
  PadicMatrix g0 = coefficient(MultiIndex{0, 0, 0});
  PadicMatrix x;
  try {
    x = lognabla::inverse(g0);
  } catch (const Error&) {
    throw Error(ErrorKind::not_invertible, "constant term is singular");
  }
  SeriesMatrix xs = from_constant(x, Window::exact(n));
  SeriesMatrix h = *this - from_constant(g0, Window::exact(n));
  SeriesMatrix sum = xs;
  if (!h.is_zero()) {
    Window w = window();
    // Each Neumann step raises the degree in some bounded coordinate, so the
    // series terminates on the window as long as no term of h lives purely in
    // unbounded coordinates.
    int bound = 2;
    for (int j = 0; j < n; ++j)
      if (w.hi[j] < kUnbounded) bound += w.hi[j];
    for (const auto& x : h.e_)
      for (const auto& [i, c] : x.terms()) {
        bool raises = false;
        for (int j = 0; j < n; ++j) raises = raises || (w.hi[j] < kUnbounded && i[j] > 0);
        if (!raises && !c.is_zero()) throw Error(ErrorKind::not_invertible, "inverse needs a bounded window");
      }
    SeriesMatrix step = -(xs * h);
    SeriesMatrix term = xs;
    for (int k = 1; k <= bound; ++k) {
      term = step * term;
      bool empty = std::all_of(term.e_.begin(), term.e_.end(), [](const LaurentSeries& s) { return s.terms().empty(); });
      if (empty) break;
      sum = sum + term;
    }
    // Pin the determined range to that of the input.
    sum = sum.truncated(w.hi);
  }
  return sum;
}

Window SeriesMatrix::window() const {
  if (e_.empty()) return Window::exact(1);
  Window w = e_.front().window();
  for (const auto& x : e_) w = w.meet(x.window());
  return w;
}

NormValue SeriesMatrix::rho_norm(const std::vector<NormValue>& radii) const {
  NormValue m = NormValue::zero();
  for (const auto& x : e_) m = max(m, x.rho_norm(radii));
  return m;
}

bool SeriesMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const LaurentSeries& s) { return s.is_zero(); });
}

bool SeriesMatrix::is_constant() const {
  return std::all_of(e_.begin(), e_.end(), [](const LaurentSeries& s) { return s.is_constant(); });
}

std::int64_t SeriesMatrix::min_precision() const {
  std::int64_t m = PadicScalar::kInfinite;
  for (const auto& x : e_) m = std::min(m, x.min_precision());
  return m;
}

}  // namespace lognabla
