#pragma once

#include "lognabla/kernels.hpp"
#include "lognabla/padic.hpp"

#include <string>
#include <variant>
#include <vector>

namespace lognabla {

// Element of Z_p given exactly as a rational or as a digit stream.
using ZpElement = std::variant<Rational, DigitStream>;

std::string describe(const ZpElement& a);

struct ExponentSet {
  std::uint32_t p = 5;
  std::vector<std::vector<ZpElement>> per_variable;
};

enum class NidStatus { proven, violated, unresolved };
std::string to_string(NidStatus s);

struct NidWitness {
  int variable = 0;
  std::size_t first = 0, second = 0;  // indices into the variable's list
  std::int64_t difference = 0;        // element[first] - element[second], positive for violations
};

struct NidReport {
  NidStatus status = NidStatus::proven;
  std::vector<NidWitness> witnesses;
  std::vector<NidWitness> unresolved;  // stream pairs agreeing to depth; difference unused
};

// Pair differences that are nonzero integers of size <= integer_window.
NidReport nid_check(const ExponentSet& sigma, std::int64_t integer_window);

enum class TypeVerdict { consistent_with_type_1, liouville_suspect };
std::string to_string(TypeVerdict v);

struct TypeTraceEntry {
  std::int64_t s = 0;
  std::int64_t valuation = 0;  // v_p(a - s)
  NormValue value;             // |a - s|^(1/s)
};

struct TypeEstimate {
  std::string target;
  std::uint32_t p = 5;
  std::int64_t s_max = 0;
  std::int64_t tail_start = 0;
  Rational theta;
  std::vector<TypeTraceEntry> trace;  // every scanned s >= 1, s != a
  NormValue estimate;                 // min of value over the tail window
  std::int64_t witness = 0;           // s attaining the estimate
  TypeVerdict verdict = TypeVerdict::consistent_with_type_1;
};

struct TypeOptions {
  std::int64_t tail_start = -1;  // default s_max / 2
  Rational theta{1, 4};
  bool parallel = true;
};

TypeEstimate type_estimate(const ZpElement& a, std::uint32_t p, std::int64_t s_max, const TypeOptions& opt = {});

struct PairEvidence {
  int variable = 0;
  std::size_t first = 0, second = 0;
  int sign = 1;  // estimate of sign * (first - second)
  TypeEstimate estimate;
};

struct NldReport {
  bool suspect = false;
  std::vector<PairEvidence> pairs;
};

// Type estimates of every difference and its negative.
NldReport nld_certify(const ExponentSet& sigma, std::int64_t s_max, const TypeOptions& opt = {});

}  // namespace lognabla
