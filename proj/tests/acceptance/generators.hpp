#pragma once

#include "lognabla/logconn.hpp"

#include <random>
#include <vector>

namespace lognabla::gen {

using Rng = std::mt19937_64;

// Constant matrix with small integer entries and unit determinant in Z_p.
PadicMatrix unit_matrix(Rng& rng, const PadicContext& ctx, std::size_t n);

// G(t) = g0 + sum of random terms of positive total degree up to deg; g0 is
// the identity when identity_constant, otherwise a random unit matrix. The
// polynomial is declared determined up to degree hi in each variable.
SeriesMatrix gauge(Rng& rng, const PadicContext& ctx, std::size_t n, int nvars, int deg, bool identity_constant, int hi);

// k rationals in Z_p, pairwise differences never integers.
std::vector<Rational> nid_exponents(Rng& rng, const PadicContext& ctx, std::size_t k);

// Commuting tuple of nvars constant matrices of size rank. Each is
// S (block scalar + c_j * shared nilpotent) S^-1, block exponents NID.
std::vector<PadicMatrix> commuting_model(Rng& rng, const PadicContext& ctx, std::size_t rank, int nvars);

}  // namespace lognabla::gen
