#pragma once

#include "lognabla/eigen.hpp"
#include "lognabla/series.hpp"

#include <vector>

namespace lognabla {

// Rank-mu module with commuting operators d_j = t_j d/dt_j acting on a fixed
// basis by d_j + N_j. Sections are column vectors (SeriesMatrix mu x k).
class LogNablaModule {
 public:
  LogNablaModule() = default;
  LogNablaModule(const PadicContext& ctx, std::size_t rank, std::vector<AlignedInterval> intervals,
                 const Window& window, std::vector<SeriesMatrix> matrices);

  const PadicContext& context() const { return ctx_; }
  std::size_t rank() const { return rank_; }
  int nvars() const { return window_.n; }
  const std::vector<AlignedInterval>& intervals() const { return intervals_; }
  const Window& window() const { return window_; }
  const std::vector<SeriesMatrix>& matrices() const { return matrices_; }
  const SeriesMatrix& matrix(int j) const { return matrices_.at(static_cast<std::size_t>(j)); }
  bool on_polydisc() const;

  // d_j applied to sections.
  SeriesMatrix apply(int j, const SeriesMatrix& v) const;
  // Largest commutator defect norm at radius 1 over variable pairs; zero means
  // integrable at tracked precision.
  bool is_integrable() const;

 private:
  PadicContext ctx_;
  std::size_t rank_ = 0;
  std::vector<AlignedInterval> intervals_;
  Window window_;
  std::vector<SeriesMatrix> matrices_;
};

struct ResidueData {
  int variable = 0;
  SeriesMatrix residue;       // N_j at t_j = 0, a series in the other variables
  bool constant = true;       // residue independent of the other variables
  PadicMatrix at_origin;      // value at t = 0
  ExponentAnalysis analysis;  // of at_origin
};

ResidueData residue(const LogNablaModule& e, int j, int search_depth = 0);

LogNablaModule make_m_xi(const PadicContext& ctx, const std::vector<PadicScalar>& xi,
                         const std::vector<AlignedInterval>& intervals, const Window& window);
LogNablaModule u_functor(const PadicContext& ctx, const std::vector<PadicMatrix>& ops,
                         const std::vector<AlignedInterval>& intervals, const Window& window);
// New basis = old basis * G; matrices become G^-1 N G + G^-1 d(G).
LogNablaModule gauge_transform(const LogNablaModule& e, const SeriesMatrix& g);

enum class ModuleOp { tensor, dual, hom };
LogNablaModule module_algebra(const LogNablaModule& e, const LogNablaModule& f, ModuleOp op);
LogNablaModule tensor(const LogNablaModule& e, const LogNablaModule& f);
LogNablaModule dual(const LogNablaModule& e);
// Hom(E, F) = E^dual (x) F; the basis vector e_a^* (x) f_b sits at a * rank(F) + b.
LogNablaModule hom(const LogNablaModule& e, const LogNablaModule& f);
LogNablaModule direct_sum(const LogNablaModule& e, const LogNablaModule& f);

}  // namespace lognabla
