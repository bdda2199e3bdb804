#pragma once

#include "lognabla/polynomial.hpp"

#include <vector>

namespace lognabla {

struct EigenBlock {
  PadicScalar eigenvalue;
  std::size_t dimension = 0;     // algebraic multiplicity
  int nilpotency_index = 0;      // multiplicity in the minimal polynomial
  PadicMatrix basis;             // columns span the generalized eigenspace
  PadicMatrix projector;
};

struct EigenDecomposition {
  std::vector<EigenBlock> blocks;
  PadicMatrix adapted_basis;     // S = [basis_1 | basis_2 | ...]
  PadicMatrix adapted_inverse;
};

// Generalized eigenspaces for the given eigenvalues (duplicates ignored).
EigenDecomposition generalized_eigenspaces(const PadicMatrix& a, const std::vector<PadicScalar>& eigenvalues);

struct ExponentAnalysis {
  PadicPolynomial characteristic;
  PadicPolynomial minimal;
  // Distinct exponents with their minimal-polynomial multiplicity.
  std::vector<PadicRoot> exponents;
  std::vector<std::size_t> algebraic_multiplicity;
};

// Characteristic polynomial, Z_p roots, minimal polynomial from iterated
// kernel ranks. Throws "exponent outside scope" when some eigenvalue is not
// in Z_p and "indeterminate root" when the root search does not resolve.
ExponentAnalysis analyze_exponents(const PadicMatrix& a, int search_depth = 0);

}  // namespace lognabla
