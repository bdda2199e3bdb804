#include "lognabla/json_io.hpp"

#include <regex>

namespace lognabla {

namespace {

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& array_at(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  return j;
}

Rational rational_from(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw SchemaError(ptr, "expected an integer or a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(ptr, e.detail());
  }
}

// Convert library errors raised while constructing values into schema errors.
template <class F>
auto guarded(const std::string& ptr, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(ptr, std::string(to_string(e.kind())) + ": " + e.detail());
  }
}

LaurentSeries entry_from_json(const Json& j, const PadicContext& ctx, const Window& w, const std::string& ptr) {
  LaurentSeries s(ctx, w);
  const bool scalar = j.is_number_integer() || j.is_string() || j.is_object();
  if (scalar) {
    s.add_to(MultiIndex{0, 0, 0}, scalar_from_json(j, ctx, ptr));
    return s;
  }
  array_at(j, ptr);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tp = at(ptr, t);
    const Json& term = j[t];
    if (!term.is_array() || term.size() != 2 || !term[0].is_array())
      throw SchemaError(tp, "a term is [[exponents...], scalar]");
    if (static_cast<int>(term[0].size()) != w.n) throw SchemaError(at(tp, 0), "one exponent per variable");
    MultiIndex i{0, 0, 0};
    for (int k = 0; k < w.n; ++k) {
      if (!term[0][static_cast<std::size_t>(k)].is_number_integer())
        throw SchemaError(at(at(tp, 0), static_cast<std::size_t>(k)), "expected an integer exponent");
      i[static_cast<std::size_t>(k)] = term[0][static_cast<std::size_t>(k)].get<int>();
    }
    if (!w.contains(i)) throw SchemaError(at(tp, 0), "exponent outside the window");
    s.add_to(i, scalar_from_json(term[1], ctx, at(tp, 1)));
  }
  return s;
}

}  // namespace

Json to_json(const PadicScalar& x) {
  Json j;
  if (x.is_exact_zero()) {
    j["v"] = "inf";
    j["unit"] = "0";
    j["prec"] = "inf";
    return j;
  }
  j["v"] = x.valuation_lower_bound();
  j["unit"] = std::to_string(x.unit());
  j["prec"] = x.precision();
  if (!x.is_zero())
    if (auto r = x.to_rational()) j["rational"] = to_string(*r);
  return j;
}

PadicScalar scalar_from_json(const Json& j, const PadicContext& ctx, const std::string& ptr) {
  if (j.is_number_integer() || j.is_string())
    return guarded(ptr, [&] { return PadicScalar::from_rational(ctx, rational_from(j, ptr)); });
  if (!j.is_object()) throw SchemaError(ptr, "expected a scalar");
  const Json& v = require(j, "v", ptr);
  const Json& prec = require(j, "prec", ptr);
  const Json& u = require(j, "unit", ptr);
  if (!u.is_string()) throw SchemaError(at(ptr, "unit"), "unit must be a decimal string");
  std::uint64_t unit = 0;
  try {
    std::size_t used = 0;
    unit = std::stoull(u.get<std::string>(), &used);
    if (used != u.get<std::string>().size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw SchemaError(at(ptr, "unit"), "unit must be a decimal string");
  }
  const auto is_inf = [](const Json& x) { return x.is_string() && x.get<std::string>() == "inf"; };
  if (is_inf(v) || is_inf(prec)) {
    if (!is_inf(v) || !is_inf(prec) || unit != 0) throw SchemaError(ptr, "exact zero is {\"v\": \"inf\", \"unit\": \"0\", \"prec\": \"inf\"}");
    return PadicScalar::exact_zero(ctx);
  }
  if (!v.is_number_integer()) throw SchemaError(at(ptr, "v"), "expected an integer or \"inf\"");
  if (!prec.is_number_integer()) throw SchemaError(at(ptr, "prec"), "expected an integer or \"inf\"");
  if (unit == 0) {
    if (v.get<std::int64_t>() != prec.get<std::int64_t>()) throw SchemaError(at(ptr, "v"), "a zero known to precision N has v = N");
    return PadicScalar::zero(ctx, prec.get<std::int64_t>());
  }
  return guarded(ptr, [&] { return PadicScalar::from_parts(ctx, v.get<std::int64_t>(), unit, prec.get<std::int64_t>()); });
}

std::string norm_to_string(const NormValue& v, std::uint32_t p) { return v.to_string(p); }

NormValue parse_norm(const std::string& text, std::uint32_t p) {
  if (text == "0") return NormValue::zero();
  if (text == "1") return NormValue::one();
  static const std::regex re(R"(^(p|[0-9]+)\^\(?([-+]?[0-9]+(/[0-9]+)?)\)?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    throw Error(ErrorKind::invalid_argument, "norm '" + text + "' is not of the form p^(q)");
  if (m[1] != "p" && std::stoull(m[1].str()) != p)
    throw Error(ErrorKind::invalid_argument, "norm '" + text + "' uses a prime other than " + std::to_string(p));
  return NormValue::from_exponent(-parse_rational(m[2].str()));
}

NormValue norm_from_json(const Json& j, std::uint32_t p, const std::string& ptr) {
  if (!j.is_string()) throw SchemaError(ptr, "a norm is a string such as \"p^(-1/2)\"");
  return guarded(ptr, [&] { return parse_norm(j.get<std::string>(), p); });
}

Json to_json(const PadicMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

PadicMatrix matrix_from_json(const Json& j, const PadicContext& ctx, const std::string& ptr) {
  array_at(j, ptr);
  const std::size_t r = j.size();
  const std::size_t c = r == 0 ? 0 : array_at(j[0], at(ptr, 0)).size();
  PadicMatrix out(ctx, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (array_at(j[i], at(ptr, i)).size() != c) throw SchemaError(at(ptr, i), "ragged matrix row");
    for (std::size_t k = 0; k < c; ++k) out(i, k) = scalar_from_json(j[i][k], ctx, at(at(ptr, i), k));
  }
  return out;
}

Json to_json(const Window& w) {
  Json j = Json::array();
  for (int k = 0; k < w.n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    Json pair = Json::array({w.lo[kk]});
    if (w.hi[kk] >= kUnbounded)
      pair.push_back(nullptr);
    else
      pair.push_back(w.hi[kk]);
    j.push_back(std::move(pair));
  }
  return j;
}

Window window_from_json(const Json& j, const std::string& ptr) {
  array_at(j, ptr);
  if (j.empty() || j.size() > static_cast<std::size_t>(kMaxVars))
    throw SchemaError(ptr, "one [lo, hi] pair per variable, at most " + std::to_string(kMaxVars));
  Window w;
  w.n = static_cast<int>(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Json& pair = j[k];
    const std::string pp = at(ptr, k);
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !(pair[1].is_null() || pair[1].is_number_integer()))
      throw SchemaError(pp, "expected [lo, hi] with hi an integer or null");
    w.lo[k] = pair[0].get<int>();
    w.hi[k] = pair[1].is_null() ? kUnbounded : pair[1].get<int>();
    if (w.hi[k] < w.lo[k]) throw SchemaError(pp, "hi below lo");
  }
  return w;
}

Json to_json(const AlignedInterval& iv, std::uint32_t p) {
  Json j;
  j["lower"] = norm_to_string(iv.lower, p);
  if (iv.upper)
    j["upper"] = norm_to_string(*iv.upper, p);
  else
    j["upper"] = nullptr;
  j["lower_closed"] = iv.lower_closed;
  j["upper_closed"] = iv.upper_closed;
  return j;
}

AlignedInterval interval_from_json(const Json& j, std::uint32_t p, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "an interval is an object");
  AlignedInterval iv;
  iv.lower = norm_from_json(require(j, "lower", ptr), p, at(ptr, "lower"));
  const Json& up = require(j, "upper", ptr);
  iv.upper = up.is_null() ? std::nullopt : std::optional<NormValue>(norm_from_json(up, p, at(ptr, "upper")));
  for (const char* key : {"lower_closed", "upper_closed"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_boolean()) throw SchemaError(at(ptr, key), "expected a boolean");
  }
  iv.lower_closed = j.value("lower_closed", true);
  iv.upper_closed = j.value("upper_closed", true);
  guarded(ptr, [&] {
    iv.validate();
    return 0;
  });
  return iv;
}

Json to_json(const SeriesMatrix& m) {
  Json j;
  j["window"] = to_json(m.window());
  const int n = m.nvars();
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      Json terms = Json::array();
      for (const auto& [i, x] : m(r, c).terms()) {
        if (x.is_exact_zero()) continue;
        Json idx = Json::array();
        for (int k = 0; k < n; ++k) idx.push_back(i[static_cast<std::size_t>(k)]);
        terms.push_back(Json::array({idx, to_json(x)}));
      }
      row.push_back(std::move(terms));
    }
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

SeriesMatrix series_matrix_from_json(const Json& j, const PadicContext& ctx, const Window& w, const std::string& ptr) {
  const Json& rows = j.is_object() ? require(j, "entries", ptr) : j;
  const std::string rp = j.is_object() ? at(ptr, "entries") : ptr;
  array_at(rows, rp);
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : array_at(rows[0], at(rp, 0)).size();
  SeriesMatrix out(ctx, r, c, w);
  for (std::size_t a = 0; a < r; ++a) {
    if (array_at(rows[a], at(rp, a)).size() != c) throw SchemaError(at(rp, a), "ragged matrix row");
    for (std::size_t b = 0; b < c; ++b) out(a, b) = entry_from_json(rows[a][b], ctx, w, at(at(rp, a), b));
  }
  return out;
}

Json to_json(const LogNablaModule& e) {
  Json j;
  j["p"] = e.context().p;
  j["prec"] = e.context().cap;
  j["rank"] = e.rank();
  j["n"] = e.nvars();
  Json iv = Json::array();
  for (const auto& i : e.intervals()) iv.push_back(to_json(i, e.context().p));
  j["intervals"] = std::move(iv);
  j["window"] = to_json(e.window());
  Json ms = Json::array();
  for (const auto& m : e.matrices()) ms.push_back(to_json(m)["entries"]);
  j["matrices"] = std::move(ms);
  return j;
}

LogNablaModule module_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "a module is an object");
  const std::int64_t p = require_int(j, "p", ptr);
  if (p < 2 || p > (1 << 20) || !is_prime(static_cast<std::uint32_t>(p))) throw SchemaError(at(ptr, "p"), "p must be a prime");
  const std::int64_t prec = j.contains("prec") ? require_int(j, "prec", ptr) : 20;
  const PadicContext ctx = guarded(at(ptr, "prec"), [&] { return PadicContext(static_cast<std::uint32_t>(p), static_cast<int>(prec)); });
  const std::int64_t rank = require_int(j, "rank", ptr);
  if (rank < 1 || rank > 64) throw SchemaError(at(ptr, "rank"), "rank must be in [1, 64]");
  const std::int64_t n = j.contains("n") ? require_int(j, "n", ptr) : 1;
  if (n < 1 || n > kMaxVars) throw SchemaError(at(ptr, "n"), "n must be in [1, " + std::to_string(kMaxVars) + "]");
  const Window w = j.contains("window") ? window_from_json(j["window"], at(ptr, "window"))
                                        : Window::exact(static_cast<int>(n));
  if (w.n != n) throw SchemaError(at(ptr, "window"), "window size differs from n");
  const Json& ivs = array_at(require(j, "intervals", ptr), at(ptr, "intervals"));
  if (static_cast<std::int64_t>(ivs.size()) != n) throw SchemaError(at(ptr, "intervals"), "one interval per variable");
  std::vector<AlignedInterval> intervals;
  for (std::size_t k = 0; k < ivs.size(); ++k)
    intervals.push_back(interval_from_json(ivs[k], ctx.p, at(at(ptr, "intervals"), k)));
  const Json& ms = array_at(require(j, "matrices", ptr), at(ptr, "matrices"));
  if (static_cast<std::int64_t>(ms.size()) != n) throw SchemaError(at(ptr, "matrices"), "one matrix per variable");
  std::vector<SeriesMatrix> mats;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const std::string mp = at(at(ptr, "matrices"), k);
    SeriesMatrix m = series_matrix_from_json(ms[k], ctx, w, mp);
    if (m.rows() != static_cast<std::size_t>(rank) || m.cols() != static_cast<std::size_t>(rank))
      throw SchemaError(mp, "matrix must be rank x rank");
    mats.push_back(std::move(m));
  }
  return guarded(ptr, [&] {
    return LogNablaModule(ctx, static_cast<std::size_t>(rank), intervals, w, std::move(mats));
  });
}

ZpElement zp_from_json(const Json& j, std::uint32_t p, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "a Z_p element is an object");
  if (j.contains("rational")) {
    const Rational r = rational_from(j["rational"], at(ptr, "rational"));
    if (r.denominator() % static_cast<std::int64_t>(p) == 0) throw SchemaError(at(ptr, "rational"), "not in Z_p");
    return r;
  }
  if (j.contains("digits")) {
    const Json& d = j["digits"];
    std::vector<std::uint8_t> digits;
    if (d.is_string()) {
      for (char ch : d.get<std::string>()) {
        if (ch < '0' || ch > '9') throw SchemaError(at(ptr, "digits"), "digit strings use 0-9");
        digits.push_back(static_cast<std::uint8_t>(ch - '0'));
      }
    } else {
      array_at(d, at(ptr, "digits"));
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (!d[k].is_number_unsigned()) throw SchemaError(at(at(ptr, "digits"), k), "expected a digit");
        digits.push_back(static_cast<std::uint8_t>(d[k].get<unsigned>()));
      }
    }
    const bool term = j.value("terminates", false);
    return guarded(at(ptr, "digits"), [&] { return DigitStream::from_digits(p, digits, term); });
  }
  if (j.contains("positions")) {
    const Json& ps = array_at(j["positions"], at(ptr, "positions"));
    std::vector<std::int64_t> pos;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (!ps[k].is_number_integer()) throw SchemaError(at(at(ptr, "positions"), k), "expected an integer");
      pos.push_back(ps[k].get<std::int64_t>());
    }
    const std::int64_t depth = require_int(j, "depth", ptr);
    return guarded(ptr, [&] { return DigitStream::from_positions(p, pos, depth); });
  }
  throw SchemaError(ptr, "expected one of rational, digits, positions");
}

const Json& require(const Json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(ptr, "missing key '" + key + "'");
  return j[key];
}

std::int64_t require_int(const Json& j, const std::string& key, const std::string& ptr) {
  const Json& v = require(j, key, ptr);
  if (!v.is_number_integer()) throw SchemaError(at(ptr, key), "expected an integer");
  return v.get<std::int64_t>();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace lognabla
