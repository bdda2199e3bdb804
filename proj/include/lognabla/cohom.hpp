#pragma once

#include "lognabla/logconn.hpp"

#include <array>
#include <compare>
#include <map>
#include <vector>

namespace lognabla {

// Bit j set means dlog t_j is a factor; factors are ordered by index.
using WedgeMask = unsigned;

struct FormKey {
  MultiIndex index{0, 0, 0};
  WedgeMask wedge = 0;
  auto operator<=>(const FormKey&) const = default;
};

// Log form with coefficients in a free module of the given rank.
class LogForm {
 public:
  LogForm() = default;
  LogForm(const PadicContext& ctx, int n, std::size_t rank) : ctx_(ctx), n_(n), rank_(rank) {}
  static LogForm monomial(const PadicContext& ctx, int n, std::size_t rank, const MultiIndex& i, WedgeMask wedge,
                          const PadicMatrix& coefficient);

  const PadicContext& context() const { return ctx_; }
  int nvars() const { return n_; }
  std::size_t rank() const { return rank_; }
  const std::map<FormKey, PadicMatrix>& terms() const { return terms_; }
  void add(const FormKey& key, const PadicMatrix& v);

  LogForm operator+(const LogForm& o) const;
  LogForm operator-(const LogForm& o) const;
  bool is_zero() const;
  NormValue norm() const;  // max coefficient norm

 private:
  PadicContext ctx_;
  int n_ = 1;
  std::size_t rank_ = 1;
  std::map<FormKey, PadicMatrix> terms_;
};

struct HomotopyCheck {
  std::size_t monomials = 0;
  std::size_t failures = 0;
  NormValue defect;  // max norm of phi d + d phi - (id - g h)
};

// Complex of log forms with coefficients in U(W) on a window, differential
// d = sum_l dlog t_l (t_l d/dt_l + W_l) acting by left multiplication.
class LogDeRhamComplex {
 public:
  LogDeRhamComplex(const PadicContext& ctx, std::vector<PadicMatrix> operators, const Window& window);
  static LogDeRhamComplex twisted(const PadicContext& ctx, const std::vector<PadicScalar>& alpha, const Window& window);

  const PadicContext& context() const { return ctx_; }
  int nvars() const { return window_.n; }
  std::size_t rank() const { return rank_; }
  const std::vector<PadicMatrix>& operators() const { return w_; }
  const Window& window() const { return window_; }

  LogForm d(const LogForm& f) const;
  // Throws "resonance" naming (l, i_l) when i_l + W_l is singular.
  LogForm phi(const LogForm& f) const;
  // The section through the constant coefficient.
  LogForm gh(const LogForm& f) const;

  // Termwise check on t^I dlog t_J e_b for I in the window with |I| <= bound
  // (bound < 0: every index of the window).
  HomotopyCheck verify_homotopy(int bound = -1) const;
  // max over the window of |(i_l + W_l)^-1| for the governing index l.
  NormValue phi_growth() const;

  // Cohomology dimensions of the constant-coefficient complex (I = 0).
  std::vector<std::size_t> model_dims() const;
  // Representatives of the constant-coefficient cohomology per degree.
  std::vector<std::vector<LogForm>> model_representatives() const;
  // Cohomology dimensions of the windowed complex.
  std::vector<std::size_t> window_dims() const;

 private:
  PadicContext ctx_;
  std::size_t rank_ = 1;
  std::vector<PadicMatrix> w_;
  Window window_;
};

// phi on a rank-one complex with twist alpha.
LogForm homotopy_phi(const LogForm& form, const std::vector<PadicScalar>& alpha);

struct CohomologyReport {
  std::vector<std::size_t> dims;        // windowed complex, degree 0..n
  std::vector<std::size_t> model_dims;  // constant-coefficient complex
  std::vector<std::vector<LogForm>> representatives;  // transported model classes
  MultiIndex shift{0, 0, 0};            // integer part of alpha removed by t^shift
  HomotopyCheck homotopy;
  NormValue phi_growth;
};

CohomologyReport dr_cohomology(const LogDeRhamComplex& complex, int homotopy_bound = -1);
CohomologyReport dr_cohomology(const PadicContext& ctx, const std::vector<PadicScalar>& alpha,
                               const std::vector<AlignedInterval>& intervals, const Window& window, int homotopy_bound = -1);

struct HomReport {
  std::size_t dimension = 0;
  std::vector<SeriesMatrix> basis;  // rank(F) x rank(E) matrices of series
};

// Horizontal sections of Hom(E, F) on the window.
HomReport hom_space(const LogNablaModule& e, const LogNablaModule& f);

struct ExtComparison {
  std::array<std::size_t, 2> model{0, 0};
  std::array<std::size_t, 2> annulus{0, 0};
  bool equal = false;
  std::string witness;
  CohomologyReport annulus_report;
};

// Ext^0 and Ext^1 between U(E_model) and U(F_model) in the model and on the window.
ExtComparison ext_compare(const std::vector<PadicMatrix>& e_model, const std::vector<PadicMatrix>& f_model,
                          const std::vector<AlignedInterval>& intervals, const Window& window, int homotopy_bound = -1);

}  // namespace lognabla
