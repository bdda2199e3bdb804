#pragma once

#include "lognabla/logconn.hpp"
#include "lognabla/sigma.hpp"

#include <optional>
#include <vector>

namespace lognabla {

// Exponents of one variable with minimal-polynomial multiplicities.
struct ExponentRow {
  std::vector<PadicScalar> xi;
  std::vector<int> multiplicity;
};

enum class QChoice { one, kernel, eigenspace };
std::string to_string(QChoice q);

// D_l = prod_i Q_i(d_i) prod_k prod_{j<=l} [ (j - (d_i - xi_ik))(j + (d_i - xi_ik))
//       / ((j - (xi_i1 - xi_ik))(j + (xi_i1 - xi_ik))) ]^m
// with xi_i1 the target exponent (row entry 0).
// Q choices: one; kernel = (x - xi_i1)^(m_i1 - 1) prod_{k>1} (x - xi_ik)^m_ik;
// eigenspace = prod_{k>1} (x - xi_ik)^m_ik.
struct DlOperator {
  std::vector<ExponentRow> table;
  std::vector<PadicPolynomial> q;
  int m = 1;
  int level = 0;

  // D_level as a polynomial in x = d_i for a single variable module.
  PadicPolynomial univariate() const;
  // D_level(v) from scratch.
  SeriesMatrix apply(const LogNablaModule& e, const SeriesMatrix& v) const;
  // Apply prod_i Q_i(d_i).
  SeriesMatrix apply_q(const LogNablaModule& e, const SeriesMatrix& v) const;
  // D_l = step_l o D_{l-1}.
  SeriesMatrix step(const LogNablaModule& e, const SeriesMatrix& v, int l) const;
};

// Rows reordered so the target comes first. Throws "resonance" naming
// (variable, k, j) when some j +- (xi_i1 - xi_ik) vanishes for j <= l.
DlOperator build_dl(const std::vector<ExponentRow>& table, const std::vector<PadicScalar>& target, QChoice q, int l);

// Exponent rows of e: residues on discs, constant matrices otherwise.
std::vector<ExponentRow> exponent_table(const LogNablaModule& e);

struct HorizontalOptions {
  int l_max = -1;                         // default K + run, K the window extent
  int run = 5;
  NormValue eta = NormValue::zero();      // zero means p^(-1/2)
  std::optional<std::vector<ExponentRow>> table;
  std::optional<SeriesMatrix> probes;     // default t^J e_b on the window
  QChoice q = QChoice::eigenspace;
};

struct HorizontalSpace {
  std::vector<PadicScalar> xi;
  std::vector<AlignedInterval> intervals;
  SeriesMatrix sections;                  // rank x dim
  std::size_t dimension = 0;
  int l_max = 0;
  int run = 0;
  std::size_t probe_count = 0;
  std::size_t stable_combinations = 0;
  std::int64_t precision_loss = 0;        // absolute digits consumed by D_l
  std::vector<NormValue> difference_norms;  // |D_l - D_(l-1)| over stable combinations
  EtaNullReport eta_report;
  std::string note;
};

HorizontalSpace horizontal_sections(const LogNablaModule& e, const std::vector<PadicScalar>& xi, const HorizontalOptions& opt = {});

struct DlBoundReport {
  std::vector<int> levels;
  std::vector<NormValue> factor_bound;      // A_l
  std::vector<NormValue> observed;          // max over probes of |D_l v - D_(l-1) v|
  std::vector<NormValue> previous;          // max over probes of |D_(l-1) v|
  NormValue operator_constant;
};

DlBoundReport dl_difference_bound(const LogNablaModule& e, const std::vector<PadicScalar>& xi, int l_lo, int l_hi, const NormValue& rho,
                                  const HorizontalOptions& opt = {});

struct LogConvergenceReport {
  EtaNullReport eta_report;
  NormValue radius;
  int index_bound = 0;
  std::vector<NormValue> shell_norms;  // max_{|I|=k} |P_I(d)(e_b)|
};

LogConvergenceReport log_convergence_check(const LogNablaModule& e, const NormValue& a_prime, const NormValue& eta, int index_bound);

struct GradedPiece {
  std::vector<PadicScalar> xi;
  std::size_t dimension = 0;
  SeriesMatrix sections;  // in the original basis
};

struct FiltrationOptions {
  HorizontalOptions horizontal;
  std::int64_t nld_s_max = 625;
  bool require_log_convergence = true;
  NormValue a_prime = NormValue::zero();  // zero means p^(-1/2) times the outer radius
  int log_index_bound = 30;
};

struct Filtration {
  std::vector<GradedPiece> pieces;
  SeriesMatrix adapted_basis;             // columns: pieces in order
  std::vector<SeriesMatrix> adapted_matrices;  // block upper triangular
  LogConvergenceReport log_convergence;
  NldReport nld;
};

Filtration unipotent_filtration(const LogNablaModule& e, const std::vector<std::vector<PadicScalar>>& sigma,
                                const FiltrationOptions& opt = {});

struct SubmoduleExtension {
  PadicMatrix model_basis;   // H inside the constant model
  SeriesMatrix sections;     // basis of the extension in the basis of E
  LogNablaModule sub;        // the extension with its induced connection
};

// f_sections: rank(E) x r sections over the punctured part.
SubmoduleExtension extend_submodule(const LogNablaModule& e, const SeriesMatrix& f_sections, int order);

}  // namespace lognabla
