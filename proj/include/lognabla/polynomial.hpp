#pragma once

#include "lognabla/matrix.hpp"

#include <vector>

namespace lognabla {

// Univariate polynomial over Q_p, coefficients from the constant term up.
class PadicPolynomial {
 public:
  PadicPolynomial() = default;
  PadicPolynomial(const PadicContext& ctx, std::vector<PadicScalar> coeffs);
  static PadicPolynomial constant(const PadicContext& ctx, const PadicScalar& c);
  static PadicPolynomial linear_root(const PadicContext& ctx, const PadicScalar& root);  // x - root
  static PadicPolynomial from_rationals(const PadicContext& ctx, const std::vector<Rational>& coeffs);

  const PadicContext& context() const { return ctx_; }
  // Degree after dropping leading coefficients that are zero at precision; -1 for zero.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<PadicScalar>& coeffs() const { return c_; }
  const PadicScalar& operator[](std::size_t i) const { return c_[i]; }
  PadicScalar leading() const;
  bool is_zero() const { return c_.empty(); }

  PadicScalar operator()(const PadicScalar& x) const;
  PadicMatrix operator()(const PadicMatrix& x) const;
  PadicPolynomial derivative() const;
  PadicPolynomial operator+(const PadicPolynomial& o) const;
  PadicPolynomial operator-(const PadicPolynomial& o) const;
  PadicPolynomial operator*(const PadicPolynomial& o) const;
  PadicPolynomial operator*(const PadicScalar& c) const;
  PadicPolynomial pow(int k) const;
  PadicPolynomial monic() const;
  // Rescaled by a power of p so that the minimal coefficient valuation is 0.
  PadicPolynomial primitive() const;
  // Requires a leading coefficient invertible at precision.
  void divmod(const PadicPolynomial& d, PadicPolynomial& q, PadicPolynomial& r) const;
  // Exact division; throws if the remainder is not zero at precision.
  PadicPolynomial exact_div(const PadicPolynomial& d) const;
  bool equals(const PadicPolynomial& o) const { return (*this - o).is_zero(); }

 private:
  void trim();
  PadicContext ctx_;
  std::vector<PadicScalar> c_;
};

// Monic gcd over Q_p at tracked precision.
PadicPolynomial gcd(const PadicPolynomial& a, const PadicPolynomial& b);

struct SquarefreeFactor {
  PadicPolynomial factor;  // monic, squarefree
  int multiplicity;
};
// Yun's decomposition f = lead * prod factor^multiplicity.
std::vector<SquarefreeFactor> squarefree_decomposition(const PadicPolynomial& f);

// det(xI - A), coefficients from the constant term up, via the division-free
// Berkowitz recursion.
PadicPolynomial characteristic_polynomial(const PadicMatrix& a);

struct PadicRoot {
  PadicScalar value;
  int multiplicity;
};
// A residue class c + p^depth Z_p that may contain roots but was not resolved.
struct IndeterminateRoot {
  PadicScalar center;
  int depth;
};
struct RootReport {
  std::vector<PadicRoot> roots;
  std::vector<IndeterminateRoot> indeterminate;
  int found_degree() const;
};
// All roots of f in Z_p. Never drops a residue class silently: unresolved
// classes are listed in the report. Precondition: f nonzero with unit leading
// coefficient.
RootReport hensel_roots_zp(const PadicPolynomial& f, int search_depth);

}  // namespace lognabla
