#include "lognabla/error.hpp"
#include "lognabla/series.hpp"

#include <algorithm>
#include <numeric>

namespace lognabla {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

void compositions(int n, int k, MultiIndex& cur, int pos, const std::function<void(const MultiIndex&)>& f) {
  if (pos == n - 1) {
    cur[pos] = k;
    f(cur);
    return;
  }
  for (int a = 0; a <= k; ++a) {
    cur[pos] = a;
    compositions(n, k - a, cur, pos + 1, f);
  }
}

NormValue range_max(const std::vector<NormValue>& v, std::size_t b, std::size_t e) {
  NormValue m = NormValue::zero();
  for (std::size_t k = b; k < e; ++k) m = max(m, v[k]);
  return m;
}

struct Trend {
  bool decaying = true;
  bool rising = false;
  double slope = 0;
};

// Sign of the least-squares slope of log_p of the nonzero shells over [b, e),
// computed exactly on integers scaled by the common denominator.
Trend tail_trend(const std::vector<NormValue>& v, std::size_t b, std::size_t e) {
  std::vector<std::size_t> ks;
  std::int64_t den = 1;
  for (std::size_t k = b; k < e; ++k)
    if (!v[k].is_zero()) {
      ks.push_back(k);
      den = std::lcm(den, v[k].log().denominator());
    }
  Trend t;
  if (ks.size() < 2) return t;
  __extension__ using i128 = __int128;
  i128 n = static_cast<i128>(ks.size()), sk = 0, skk = 0, sy = 0, sky = 0;
  for (std::size_t k : ks) {
    const Rational y = v[k].log();
    const i128 yi = static_cast<i128>(y.numerator()) * (den / y.denominator());
    sk += static_cast<i128>(k);
    skk += static_cast<i128>(k) * static_cast<i128>(k);
    sy += yi;
    sky += static_cast<i128>(k) * yi;
  }
  const i128 num = n * sky - sk * sy;
  const i128 var = n * skk - sk * sk;
  t.decaying = num < 0;
  t.rising = num > 0;
  t.slope = static_cast<double>(num) / static_cast<double>(var) / static_cast<double>(den);
  return t;
}

}  // namespace

EtaNullReport eta_null_from_norms(const std::vector<NormValue>& norms, const NormValue& eta, const NormValue& witness) {
  if (eta.is_zero() || eta > NormValue::one()) throw Error(ErrorKind::invalid_argument, "eta must lie in (0, 1]");
  if (norms.size() < 2) throw Error(ErrorKind::invalid_argument, "index bound must be at least 1");
  EtaNullReport r;
  r.eta = eta;
  r.witness = witness;
  r.index_bound = static_cast<int>(norms.size()) - 1;
  for (std::size_t k = 0; k < norms.size(); ++k) r.shells.push_back(norms[k] * eta.pow(Rational(static_cast<std::int64_t>(k))));
  const std::size_t bound = norms.size() - 1;
  const std::size_t t0 = bound / 2 + 1;
  const std::size_t len = bound + 1 - t0;
  const std::size_t mid = len >= 2 ? t0 + len / 2 : t0;
  r.tail_start = static_cast<int>(t0);
  r.first_half_max = len >= 2 ? range_max(r.shells, t0, mid) : range_max(r.shells, t0, bound + 1);
  r.second_half_max = range_max(r.shells, mid, bound + 1);
  NormValue tail_max = range_max(r.shells, t0, bound + 1);
  const Trend trend = tail_trend(r.shells, t0, bound + 1);
  r.tail_slope = trend.slope;
  r.decaying = trend.decaying;
  const bool below = tail_max <= witness;
  const bool decaying = trend.decaying;
  if (below && decaying) {
    r.verdict = Verdict::pass;
    r.reason = "tail below witness and trending down";
  } else if (trend.rising && !below) {
    r.verdict = Verdict::fail;
    r.reason = "tail trending up and exceeds the witness";
  } else {
    r.verdict = Verdict::inconclusive;
    r.reason = below ? "tail below witness but not trending down"
                     : (decaying ? "tail decaying but still above witness" : "tail flat and above witness");
  }
  return r;
}

EtaNullReport eta_null_test(const MultiSequence& seq, const NormValue& eta, int index_bound, const NormValue& witness) {
  if (index_bound < 1) throw Error(ErrorKind::invalid_argument, "index bound must be at least 1");
  if (seq.n < 1 || seq.n > kMaxVars) throw Error(ErrorKind::invalid_argument, "bad multisequence dimension");
  std::vector<NormValue> norms;
  for (int k = 0; k <= index_bound; ++k) {
    NormValue m = NormValue::zero();
    MultiIndex cur{0, 0, 0};
    compositions(seq.n, k, cur, 0, [&](const MultiIndex& i) { m = max(m, seq.term(i).rho_norm(seq.radii)); });
    norms.push_back(m);
  }
  return eta_null_from_norms(norms, eta, witness);
}

}  // namespace lognabla
