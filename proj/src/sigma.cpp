#include "lognabla/sigma.hpp"

#include "lognabla/error.hpp"

namespace lognabla {

namespace {

std::int64_t stream_depth_hint(const ZpElement& a, const ZpElement& b) {
  std::int64_t d = 0;
  if (auto s = std::get_if<DigitStream>(&a)) d = std::max(d, s->depth());
  if (auto s = std::get_if<DigitStream>(&b)) d = std::max(d, s->depth());
  return d;
}

DigitStream as_stream(const ZpElement& a, std::uint32_t p, std::int64_t depth) {
  if (auto s = std::get_if<DigitStream>(&a)) {
    if (s->p != p) throw Error(ErrorKind::invalid_argument, "digit stream over a different prime");
    return *s;
  }
  const Rational& r = std::get<Rational>(a);
  return DigitStream::from_rational(p, r.numerator(), r.denominator(), depth);
}

void require_zp(const Rational& r, std::uint32_t p) {
  if (r.denominator() % static_cast<std::int64_t>(p) == 0)
    throw Error(ErrorKind::exponent_outside_scope, to_string(r) + " is not in Z_" + std::to_string(p));
}

ZpElement difference(const ZpElement& a, const ZpElement& b, std::uint32_t p) {
  auto ra = std::get_if<Rational>(&a);
  auto rb = std::get_if<Rational>(&b);
  if (ra && rb) return *ra - *rb;
  std::int64_t depth = stream_depth_hint(a, b);
  return as_stream(a, p, depth) - as_stream(b, p, depth);
}

ZpElement negate(const ZpElement& a) {
  if (auto r = std::get_if<Rational>(&a)) return -*r;
  return -std::get<DigitStream>(a);
}

}  // namespace

std::string describe(const ZpElement& a) {
  if (auto r = std::get_if<Rational>(&a)) return to_string(*r);
  const auto& s = std::get<DigitStream>(a);
  std::string out = "stream(p=" + std::to_string(s.p) + ", depth=" + std::to_string(s.depth()) + ", nonzero at";
  std::size_t shown = 0;
  for (auto k : s.nonzero) {
    if (shown++ == 8) {
      out += " ...";
      break;
    }
    out += " " + std::to_string(k);
  }
  return out + ")";
}

std::string to_string(NidStatus s) {
  switch (s) {
    case NidStatus::proven: return "proven";
    case NidStatus::violated: return "violated";
    case NidStatus::unresolved: return "unresolved";
  }
  return "?";
}

std::string to_string(TypeVerdict v) {
  return v == TypeVerdict::consistent_with_type_1 ? "consistent-with-type-1" : "liouville-suspect";
}

NidReport nid_check(const ExponentSet& sigma, std::int64_t integer_window) {
  NidReport rep;
  for (std::size_t var = 0; var < sigma.per_variable.size(); ++var) {
    const auto& xs = sigma.per_variable[var];
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        ZpElement d = difference(xs[i], xs[j], sigma.p);
        NidWitness w{static_cast<int>(var), i, j, 0};
        if (auto r = std::get_if<Rational>(&d)) {
          if (r->denominator() == 1 && r->numerator() != 0 &&
              (r->numerator() <= integer_window && r->numerator() >= -integer_window)) {
            w.difference = r->numerator();
            rep.witnesses.push_back(w);
          }
          continue;
        }
        // Digits agreeing with an integer to full depth decide the question
        // only when both expansions are known to terminate.
        const auto& s = std::get<DigitStream>(d);
        for (std::int64_t n = -integer_window; n <= integer_window; ++n) {
          DigitStream e = DigitStream::from_rational(sigma.p, n, 1, s.depth());
          if (s.digits != e.digits) continue;
          w.difference = n;
          if (s.terminates && e.terminates) {
            if (n != 0) rep.witnesses.push_back(w);
          } else {
            rep.unresolved.push_back(w);
          }
          break;
        }
      }
  }
  for (auto& w : rep.witnesses)
    if (w.difference < 0) {
      std::swap(w.first, w.second);
      w.difference = -w.difference;
    }
  rep.status = !rep.witnesses.empty() ? NidStatus::violated : !rep.unresolved.empty() ? NidStatus::unresolved : NidStatus::proven;
  return rep;
}

TypeEstimate type_estimate(const ZpElement& a, std::uint32_t p, std::int64_t s_max, const TypeOptions& opt) {
  if (s_max < 1) throw Error(ErrorKind::invalid_argument, "S_max must be positive");
  TypeEstimate t;
  t.target = describe(a);
  t.p = p;
  t.s_max = s_max;
  t.tail_start = opt.tail_start < 0 ? std::max<std::int64_t>(1, s_max / 2) : opt.tail_start;
  if (t.tail_start < 1 || t.tail_start > s_max) throw Error(ErrorKind::invalid_argument, "tail start must lie in [1, S_max]");
  t.theta = opt.theta;

  std::vector<std::int64_t> vals;
  if (auto r = std::get_if<Rational>(&a)) {
    require_zp(*r, p);
    vals = opt.parallel ? rational_scan_omp(p, r->numerator(), r->denominator(), 1, s_max)
                        : rational_scan_serial(p, r->numerator(), r->denominator(), 1, s_max);
  } else {
    const auto& st = std::get<DigitStream>(a);
    if (st.p != p) throw Error(ErrorKind::invalid_argument, "digit stream over a different prime");
    vals = opt.parallel ? stream_scan_omp(st, 1, s_max) : stream_scan_serial(st, 1, s_max);
  }
  bool have = false;
  for (std::int64_t s = 1; s <= s_max; ++s) {
    std::int64_t v = vals[static_cast<std::size_t>(s - 1)];
    if (v == kScanSkip) continue;
    if (v == kScanExhausted)
      throw Error(ErrorKind::depth_exhausted, "digits exhausted before resolving v(a - " + std::to_string(s) + ")");
    NormValue value = NormValue::from_exponent(Rational(v, s));
    t.trace.push_back({s, v, value});
    if (s >= t.tail_start && (!have || value < t.estimate)) {
      t.estimate = value;
      t.witness = s;
      have = true;
    }
  }
  if (!have) throw Error(ErrorKind::invalid_argument, "tail window contains no admissible s");
  t.verdict = t.estimate < NormValue::from_exponent(t.theta) ? TypeVerdict::liouville_suspect : TypeVerdict::consistent_with_type_1;
  return t;
}

NldReport nld_certify(const ExponentSet& sigma, std::int64_t s_max, const TypeOptions& opt) {
  NldReport rep;
  for (std::size_t var = 0; var < sigma.per_variable.size(); ++var) {
    const auto& xs = sigma.per_variable[var];
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i; j < xs.size(); ++j) {
        ZpElement d = difference(xs[i], xs[j], sigma.p);
        for (int sign : {1, -1}) {
          if (i == j && sign < 0) continue;
          PairEvidence e{static_cast<int>(var), i, j, sign, type_estimate(sign > 0 ? d : negate(d), sigma.p, s_max, opt)};
          rep.suspect = rep.suspect || e.estimate.verdict == TypeVerdict::liouville_suspect;
          rep.pairs.push_back(std::move(e));
        }
      }
  }
  return rep;
}

}  // namespace lognabla
