#pragma once

#include "lognabla/logconn.hpp"

#include <string>
#include <vector>

namespace lognabla {

// Inverse of Y -> i Y + N0 Y - Y N0 through the generalized eigenspaces of N0:
// the blockwise scalar part h1 (multiplication by xi_l - xi_k + i) and the
// nilpotent part h2, combined as sum_{s<e} (-1)^s h1^-(s+1) h2^s.
class ShiftedCommutatorInverse {
 public:
  explicit ShiftedCommutatorInverse(const PadicMatrix& n0, int search_depth = 0);
  // Eigenvalues of n0 in a chosen block order.
  ShiftedCommutatorInverse(const PadicMatrix& n0, const std::vector<PadicScalar>& eigenvalues);

  PadicMatrix apply(const PadicMatrix& r, int i) const;
  // Same map in the adapted basis S: r and the result are S^-1 (.) S.
  PadicMatrix apply_adapted(const PadicMatrix& t, int i) const;
  const PadicMatrix& adapted_basis() const { return s_; }
  const PadicMatrix& adapted_inverse() const { return sinv_; }
  // Checks xi_l - xi_k + j != 0 for 1 <= j <= order; throws "resonance".
  void check_resonance(int order) const;
  // max over block pairs of |(xi_l - xi_k + i)^-1|.
  NormValue max_inverse_factor(int i) const;

  const std::vector<PadicScalar>& eigenvalues() const { return xi_; }
  int nilpotency() const { return e_; }           // h2^e = 0
  NormValue conditioning() const { return kappa2_; }  // (|S| |S^-1|)^2
  NormValue nilpotent_norm() const { return nil_norm_; }

 private:
  PadicContext ctx_;
  std::vector<PadicScalar> xi_;
  std::vector<std::size_t> block_of_;  // adapted coordinate -> block
  PadicMatrix s_, sinv_, nil_;
  int e_ = 1;
  NormValue kappa2_, nil_norm_;
};

struct FuchsConstants {
  NormValue a;                         // outer radius
  NormValue c;                         // max of the series and operator constants, at least 1
  NormValue c_series;                  // max_i |N_i| a^i
  NormValue c_operator;                // bounds for h1^-1 and h2
  int e = 1;
  std::vector<NormValue> a_partial;    // A_1 .. A_order
  NormValue rho_inv;                   // max_i A_i^(1/i)
};

struct FuchsResult {
  int variable = 0;
  int order = 0;
  SeriesMatrix gauge;                  // M, congruent to I mod t_j
  PadicMatrix n0;
  std::vector<PadicScalar> eigenvalues;
  std::vector<NormValue> coefficient_norms;  // |M_i|, i = 0..order
  NormValue residual;                  // |N M + d_j M - M N0| on the window
  FuchsConstants constants;
};

// Gauge taking the t_j-matrix of e to its constant residue. The residue along
// t_j must not depend on the other variables.
FuchsResult solve_constant_form(const LogNablaModule& e, int j, int order);

struct RadiusBound {
  NormValue certified_sup;   // rho^e C^-2e a; certified b lies strictly below
  NormValue certified;       // reported b
  NormValue empirical;       // min_i |M_i|^(-1/i) over the window
  NormValue sanity;          // max_i |M_i| certified^i
  bool polynomial = false;   // M vanishes on the upper half of the window
};

RadiusBound radius_bound(const FuchsResult& r, const NormValue& a);

struct ExtensionResult {
  std::vector<PadicMatrix> model;   // commuting constant matrices W_j
  SeriesMatrix gauge;               // E = gauge_transform(u_functor(W), gauge^-1)
  std::vector<FuchsResult> steps;   // one per variable, in processing order
  bool descent_ok = false;          // every matrix is constant after the gauge
};

ExtensionResult multivariable_extend(const LogNablaModule& e, int order);

}  // namespace lognabla
