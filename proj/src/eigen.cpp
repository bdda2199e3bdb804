#include "lognabla/eigen.hpp"

#include "lognabla/error.hpp"

namespace lognabla {

namespace {

PadicMatrix shifted(const PadicMatrix& a, const PadicScalar& xi) {
  return a - PadicMatrix::scalar(a.context(), a.rows(), xi);
}

// Integral basis of the column span whose reduction mod p has full rank, by
// elimination on the entry of least valuation.
PadicMatrix saturate(const PadicMatrix& k) {
  PadicMatrix t = k.transpose();
  const std::size_t rows = t.rows(), cols = t.cols();
  std::vector<bool> used(cols, false);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t br = r, bc = cols;
    std::int64_t best = PadicScalar::kInfinite;
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t c = 0; c < cols; ++c)
        if (!used[c] && !t(i, c).is_zero() && *t(i, c).valuation() < best) {
          best = *t(i, c).valuation();
          br = i;
          bc = c;
        }
    if (bc == cols) return k;
    used[bc] = true;
    for (std::size_t c = 0; c < cols; ++c) std::swap(t(r, c), t(br, c));
    const PadicScalar inv = t(r, bc).inverse();
    for (std::size_t c = 0; c < cols; ++c) t(r, c) *= inv;
    for (std::size_t i = r + 1; i < rows; ++i) {
      const PadicScalar f = t(i, bc);
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < cols; ++c) t(i, c) -= f * t(r, c);
    }
  }
  return t.transpose();
}

}  // namespace

ExponentAnalysis analyze_exponents(const PadicMatrix& a, int search_depth) {
  if (!a.square()) throw Error(ErrorKind::shape_mismatch, "residue must be square");
  const PadicContext& ctx = a.context();
  if (search_depth <= 0) search_depth = ctx.cap;
  ExponentAnalysis out;
  out.characteristic = characteristic_polynomial(a);
  RootReport rr = hensel_roots_zp(out.characteristic, search_depth);
  if (!rr.indeterminate.empty())
    throw Error(ErrorKind::indeterminate_root, "residue class " + rr.indeterminate.front().center.to_string() +
                                                   " unresolved at depth " +
                                                   std::to_string(rr.indeterminate.front().depth));
  std::size_t n = a.rows();
  if (rr.found_degree() != static_cast<int>(n))
    throw Error(ErrorKind::exponent_outside_scope,
                std::to_string(n - rr.found_degree()) + " eigenvalue(s) outside Z_p");
  out.minimal = PadicPolynomial::constant(ctx, PadicScalar::from_int(ctx, 1));
  for (const auto& r : rr.roots) {
    PadicMatrix b = shifted(a, r.value);
    PadicMatrix power = b;
    int e = 1;
    std::size_t target = n - static_cast<std::size_t>(r.multiplicity);
    while (rank(power) > target) {
      if (e > r.multiplicity)
        throw Error(ErrorKind::precision_exhausted, "generalized kernel rank does not stabilize");
      power = power * b;
      ++e;
    }
    out.exponents.push_back({r.value, e});
    out.algebraic_multiplicity.push_back(static_cast<std::size_t>(r.multiplicity));
    out.minimal = out.minimal * PadicPolynomial::linear_root(ctx, r.value).pow(e);
  }
  if (!out.minimal(a).is_zero())
    throw Error(ErrorKind::precision_exhausted, "minimal polynomial does not annihilate at tracked precision");
  return out;
}

EigenDecomposition generalized_eigenspaces(const PadicMatrix& a, const std::vector<PadicScalar>& eigenvalues) {
  if (!a.square()) throw Error(ErrorKind::shape_mismatch, "eigenspaces of a non-square matrix");
  const PadicContext& ctx = a.context();
  std::size_t n = a.rows();
  std::vector<PadicScalar> xs;
  for (const auto& x : eigenvalues) {
    bool dup = false;
    for (const auto& y : xs) dup = dup || x.equals(y);
    if (!dup) xs.push_back(x);
  }
  EigenDecomposition d;
  PadicMatrix s(ctx, n, 0);
  for (const auto& xi : xs) {
    PadicMatrix b = shifted(a, xi);
    // The smallest stable power keeps the kernel well conditioned.
    PadicMatrix power = b;
    for (std::size_t r = rank(power), e = 1; e < n; ++e) {
      PadicMatrix next = power * b;
      const std::size_t rn = rank(next);
      if (rn == r) break;
      power = next;
      r = rn;
    }
    PadicMatrix k = saturate(kernel(power));
    if (k.cols() == 0)
      throw Error(ErrorKind::inconsistent_eigenvalues, xi.to_string() + " is not an eigenvalue");
    EigenBlock blk;
    blk.eigenvalue = xi;
    blk.dimension = k.cols();
    blk.basis = k;
    PadicMatrix v = k;
    int e = 0;
    while (!v.is_zero()) {
      v = b * v;
      if (++e > static_cast<int>(n)) throw Error(ErrorKind::precision_exhausted, "nilpotent part not nilpotent");
    }
    blk.nilpotency_index = e;
    d.blocks.push_back(blk);
    s = PadicMatrix::hconcat(s, k);
  }
  if (s.cols() != n)
    throw Error(ErrorKind::inconsistent_eigenvalues, "eigenspaces span dimension " + std::to_string(s.cols()) +
                                                         " of " + std::to_string(n));
  PadicMatrix sinv;
  try {
    sinv = inverse(s);
  } catch (const Error&) {
    throw Error(ErrorKind::precision_exhausted, "adapted basis is singular at tracked precision");
  }
  std::size_t off = 0;
  PadicMatrix total = PadicMatrix::zero(ctx, n, n);
  for (auto& blk : d.blocks) {
    blk.projector = blk.basis * sinv.block(off, 0, blk.dimension, n);
    off += blk.dimension;
    total += blk.projector;
    if (!(blk.projector * blk.projector).equals(blk.projector))
      throw Error(ErrorKind::precision_exhausted, "projector not idempotent at tracked precision");
  }
  if (!total.equals(PadicMatrix::identity(ctx, n)))
    throw Error(ErrorKind::precision_exhausted, "projectors do not sum to the identity");
  d.adapted_basis = s;
  d.adapted_inverse = sinv;
  return d;
}

}  // namespace lognabla
