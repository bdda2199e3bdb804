#pragma once

#include "lognabla/error.hpp"
#include "lognabla/logconn.hpp"
#include "lognabla/sigma.hpp"

#include "json.hpp"

#include <string>

namespace lognabla {

using Json = nlohmann::ordered_json;

// Input that does not match the documented schema; pointer locates it.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error(ErrorKind::invalid_argument, "at " + (pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Scalars: {"v": valuation, "unit": decimal string, "prec": absolute precision},
// with "inf" for both v and prec on an exact zero and v = prec on a zero known
// to precision N. Output adds "rational" when a small rational agrees. Input also
// accepts an integer or a rational string such as "-3/4".
Json to_json(const PadicScalar& x);
PadicScalar scalar_from_json(const Json& j, const PadicContext& ctx, const std::string& ptr);

// Norms as "0", "1" or "p^(q)" with p the prime or the letter p.
std::string norm_to_string(const NormValue& v, std::uint32_t p);
NormValue parse_norm(const std::string& text, std::uint32_t p);
NormValue norm_from_json(const Json& j, std::uint32_t p, const std::string& ptr);

Json to_json(const PadicMatrix& m);
PadicMatrix matrix_from_json(const Json& j, const PadicContext& ctx, const std::string& ptr);

// Window: [[lo, hi|null], ...] with null meaning exact.
Json to_json(const Window& w);
Window window_from_json(const Json& j, const std::string& ptr);

// Interval: {"lower", "upper"|null, "lower_closed", "upper_closed"}.
Json to_json(const AlignedInterval& iv, std::uint32_t p);
AlignedInterval interval_from_json(const Json& j, std::uint32_t p, const std::string& ptr);

// Series matrix: rows of entries; an entry is a scalar (constant) or a list
// of [[exponents...], scalar] terms.
Json to_json(const SeriesMatrix& m);
SeriesMatrix series_matrix_from_json(const Json& j, const PadicContext& ctx, const Window& w, const std::string& ptr);

// Module: {"p", "prec", "rank", "n", "intervals", "window", "matrices"}.
Json to_json(const LogNablaModule& e);
LogNablaModule module_from_json(const Json& j, const std::string& ptr = "");

// Z_p element: {"rational": "1/2"}, {"digits": "0102", "terminates": bool}
// or {"positions": [...], "depth": n} (digit 1 at each position).
ZpElement zp_from_json(const Json& j, std::uint32_t p, const std::string& ptr);

// Value at a pointer with a type check; throws SchemaError.
const Json& require(const Json& j, const std::string& key, const std::string& ptr);
std::int64_t require_int(const Json& j, const std::string& key, const std::string& ptr);

// Deterministic text with two-space indent.
std::string dump(const Json& j);

}  // namespace lognabla
