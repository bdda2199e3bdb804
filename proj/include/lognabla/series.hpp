#pragma once

#include "lognabla/matrix.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lognabla {

inline constexpr int kMaxVars = 3;
// Marks an undetermined-free (exact) upper end of a window.
inline constexpr int kUnbounded = 1 << 28;

using MultiIndex = std::array<int, kMaxVars>;

int total_degree(const MultiIndex& i, int n);
std::string to_string(const MultiIndex& i, int n);

// Truncation window. Below lo every coefficient is exactly zero; above hi
// coefficients are undetermined. hi = kUnbounded means nothing is undetermined.
struct Window {
  int n = 1;
  MultiIndex lo{0, 0, 0};
  MultiIndex hi{kUnbounded, kUnbounded, kUnbounded};

  static Window box(int n, int lo, int hi);
  static Window exact(int n, int lo = 0);
  bool contains(const MultiIndex& i) const;
  bool bounded() const;
  bool determined(const MultiIndex& i) const;  // every coordinate <= hi
  Window meet(const Window& o) const;          // window of a sum
  std::size_t size() const;                    // number of indices (bounded only)
  // Compares the first n coordinates only.
  bool operator==(const Window& o) const;
};

// Calls f on every index of a bounded window in lexicographic order.
void for_each_index(const Window& w, const std::function<void(const MultiIndex&)>& f);

// Interval of radii. Closed endpoints lie in the value group by construction
// since NormValue only represents p^(rational) and 0.
struct AlignedInterval {
  NormValue lower = NormValue::zero();
  std::optional<NormValue> upper = NormValue::one();  // nullopt = +infinity
  bool lower_closed = true;
  bool upper_closed = true;

  static AlignedInterval disc(const NormValue& a, bool closed = true);
  static AlignedInterval annulus(const NormValue& b, const NormValue& c, bool lower_closed = true,
                                 bool upper_closed = true);
  bool contains_zero() const { return lower.is_zero() && lower_closed; }
  bool contains(const NormValue& r) const;
  void validate() const;
  bool operator==(const AlignedInterval& o) const;
};

class LaurentSeries {
 public:
  using Terms = std::map<MultiIndex, PadicScalar>;

  LaurentSeries() = default;
  LaurentSeries(const PadicContext& ctx, const Window& w);
  static LaurentSeries constant(const PadicContext& ctx, const Window& w, const PadicScalar& c);
  static LaurentSeries monomial(const PadicContext& ctx, const Window& w, const MultiIndex& i, const PadicScalar& c);

  const PadicContext& context() const { return ctx_; }
  int nvars() const { return w_.n; }
  const Window& window() const { return w_; }
  const Terms& terms() const { return terms_; }

  // Coefficient at i: exact zero below lo, error above hi.
  PadicScalar coefficient(const MultiIndex& i) const;
  void set(const MultiIndex& i, const PadicScalar& c);
  void add_to(const MultiIndex& i, const PadicScalar& c);

  LaurentSeries operator+(const LaurentSeries& o) const;
  LaurentSeries operator-(const LaurentSeries& o) const;
  LaurentSeries operator-() const;
  LaurentSeries operator*(const LaurentSeries& o) const;
  LaurentSeries operator*(const PadicScalar& c) const;
  LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }

  // t_j d/dt_j.
  LaurentSeries log_derivative(int j) const;
  // d/dt_j.
  LaurentSeries derivative(int j) const;
  // Value at t_j = 0 (requires no negative powers of t_j).
  LaurentSeries at_zero(int j) const;
  // Coefficient of t_j^d as a series constant in t_j.
  LaurentSeries slice(int j, int d) const;
  // Multiplication by t^shift.
  LaurentSeries shifted(const MultiIndex& shift) const;
  // Restrict the determined range to hi.
  LaurentSeries truncated(const MultiIndex& hi) const;
  // Multiplicative inverse; needs a nonzero corner coefficient at the support
  // minimum and a bounded window unless the series is a monomial.
  LaurentSeries inverse() const;

  NormValue rho_norm(const std::vector<NormValue>& radii) const;
  bool is_zero() const;
  bool is_constant() const;  // support only at the zero index
  bool equals(const LaurentSeries& o) const { return (*this - o).is_zero(); }
  std::int64_t min_precision() const;

  // Support-based lower bound per variable that is sound given the window.
  MultiIndex effective_lo() const;

 private:
  void canonicalize();
  PadicContext ctx_;
  Window w_;
  Terms terms_;
};

class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(const PadicContext& ctx, std::size_t rows, std::size_t cols, const Window& w);
  static SeriesMatrix identity(const PadicContext& ctx, std::size_t n, const Window& w);
  static SeriesMatrix from_constant(const PadicMatrix& m, const Window& w);

  const PadicContext& context() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int nvars() const;
  LaurentSeries& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const LaurentSeries& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  SeriesMatrix operator+(const SeriesMatrix& o) const;
  SeriesMatrix operator-(const SeriesMatrix& o) const;
  SeriesMatrix operator*(const SeriesMatrix& o) const;
  SeriesMatrix operator*(const PadicScalar& c) const;
  SeriesMatrix operator-() const;

  SeriesMatrix log_derivative(int j) const;
  SeriesMatrix at_zero(int j) const;
  SeriesMatrix slice(int j, int d) const;
  SeriesMatrix truncated(const MultiIndex& hi) const;
  SeriesMatrix transpose() const;
  SeriesMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  static SeriesMatrix kronecker(const SeriesMatrix& a, const SeriesMatrix& b);
  // Coefficient matrix at a multi-index.
  PadicMatrix coefficient(const MultiIndex& i) const;
  // Union of supports of the entries.
  std::vector<MultiIndex> support() const;
  // Inverse; 1x1 uses the scalar inverse, otherwise needs an invertible
  // constant coefficient and no negative powers.
  SeriesMatrix inverse() const;

  Window window() const;  // meet of entry windows
  NormValue rho_norm(const std::vector<NormValue>& radii) const;
  bool is_zero() const;
  bool is_constant() const;
  bool equals(const SeriesMatrix& o) const { return (*this - o).is_zero(); }
  std::int64_t min_precision() const;

 private:
  PadicContext ctx_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<LaurentSeries> e_;
};

// ------------------------------------------------------------ eta-null test

struct MultiSequence {
  int n = 1;
  std::function<SeriesMatrix(const MultiIndex&)> term;
  std::vector<NormValue> radii;
};

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct EtaNullReport {
  Verdict verdict = Verdict::inconclusive;
  NormValue eta;
  NormValue witness;
  int index_bound = 0;
  std::vector<NormValue> shells;  // max over |I| = k of |v_I| eta^k
  int tail_start = 0;
  NormValue first_half_max;
  NormValue second_half_max;
  // Least-squares slope of log_p over the nonzero tail shells; decaying means
  // it is negative (or fewer than two tail shells are nonzero).
  double tail_slope = 0;
  bool decaying = true;
  std::string reason;
};

// Verdict from raw shell norms max_{|I|=k} |v_I| for k = 0..index_bound.
EtaNullReport eta_null_from_norms(const std::vector<NormValue>& norms, const NormValue& eta, const NormValue& witness);
EtaNullReport eta_null_test(const MultiSequence& seq, const NormValue& eta, int index_bound, const NormValue& witness);

}  // namespace lognabla
