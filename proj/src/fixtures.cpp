#include "lognabla/fixtures.hpp"

#include "lognabla/error.hpp"

namespace lognabla {

namespace {

using Terms = std::vector<std::vector<std::vector<std::pair<int, Rational>>>>;

// Entry (a, b) lists (exponent, coefficient) terms.
LogNablaModule build(const PadicContext& ctx, const Terms& entries, const AlignedInterval& iv) {
  const std::size_t rank = entries.size();
  int lo = 0;
  for (const auto& row : entries)
    for (const auto& e : row)
      for (const auto& [k, x] : e) lo = std::min(lo, k);
  const Window w = Window::exact(1, lo);
  SeriesMatrix n(ctx, rank, rank, w);
  for (std::size_t a = 0; a < rank; ++a)
    for (std::size_t b = 0; b < rank; ++b)
      for (const auto& [k, x] : entries[a][b]) n(a, b).add_to({k, 0, 0}, PadicScalar::from_rational(ctx, x));
  return LogNablaModule(ctx, rank, {iv}, w, {n});
}

Terms scalar(std::vector<std::pair<int, Rational>> terms) { return {{std::move(terms)}}; }

}  // namespace

std::vector<FixtureInfo> fixture_catalog() {
  return {
      {"trivial", "rank 1, N = 0"},
      {"M0", "rank 1, N = 0 (M_xi with xi = 0)"},
      {"M_half", "rank 1, N = 1/2"},
      {"M_third", "rank 1, N = 1/3"},
      {"nilpotent-2x2", "rank 2, N = [[0, t], [0, 0]]"},
      {"exp-scalar", "rank 1, N = t"},
      {"dt-over-t2", "rank 1, N = 1/t on the annulus [p^-1, 1]"},
      {"p-inverse-twist", "rank 1, N = 1/p"},
      {"jordan", "rank 2, N = [[0, 1], [0, 0]]"},
      {"extension", "rank 2, N = [[0, t], [0, 1/2]]"},
      {"M:<rational>", "rank 1, N = the given rational"},
  };
}

LogNablaModule fixture(const std::string& name, const PadicContext& ctx) {
  std::string base = name;
  bool annulus = false;
  if (const auto at = name.find('@'); at != std::string::npos) {
    if (name.substr(at) != "@annulus") throw Error(ErrorKind::invalid_argument, "unknown fixture suffix in '" + name + "'");
    base = name.substr(0, at);
    annulus = true;
  }
  const AlignedInterval disc = AlignedInterval::disc(NormValue::one());
  const AlignedInterval ann = AlignedInterval::annulus(NormValue::from_exponent(Rational(1)), NormValue::one());
  const AlignedInterval iv = annulus ? ann : disc;
  const Rational inv_p(1, static_cast<std::int64_t>(ctx.p));

  if (base == "trivial" || base == "M0") return build(ctx, scalar({}), iv);
  if (base == "M_half") return build(ctx, scalar({{0, Rational(1, 2)}}), iv);
  if (base == "M_third") return build(ctx, scalar({{0, Rational(1, 3)}}), iv);
  if (base == "exp-scalar") return build(ctx, scalar({{1, Rational(1)}}), iv);
  if (base == "p-inverse-twist") return build(ctx, scalar({{0, inv_p}}), iv);
  if (base == "dt-over-t2") return build(ctx, scalar({{-1, Rational(1)}}), ann);
  if (base == "nilpotent-2x2") return build(ctx, {{{}, {{1, Rational(1)}}}, {{}, {}}}, iv);
  if (base == "jordan") return build(ctx, {{{}, {{0, Rational(1)}}}, {{}, {}}}, iv);
  if (base == "extension") return build(ctx, {{{}, {{1, Rational(1)}}}, {{}, {{0, Rational(1, 2)}}}}, iv);
  if (base.rfind("M:", 0) == 0) {
    const Rational xi = parse_rational(base.substr(2));
    return build(ctx, scalar({{0, xi}}), iv);
  }
  throw Error(ErrorKind::invalid_argument, "unknown fixture '" + name + "'");
}

}  // namespace lognabla
