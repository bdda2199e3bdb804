#pragma once

#include "lognabla/json_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lognabla {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitInconclusive = 4;

struct JobConfig {
  std::string command;
  std::uint32_t p = 5;
  int prec = 20;
  int order = 30;
  int window = 8;
  std::optional<std::string> eta;       // norm, default p^(-1/2)
  std::int64_t smax = 625;
  std::vector<std::string> radii;       // norms; robba default p^(-1/2), p^(-1/4)
  std::optional<std::string> tol;       // rational gap in log_p
  std::uint64_t seed = 1;
  std::string in;
  std::string out;
  std::string format = "json";
  std::vector<std::string> fixtures;
  bool strict = false;
  int n_max = 50;
  int index_bound = 40;
  std::vector<std::string> xi;          // rational target exponent per variable
  std::vector<std::string> alpha;       // rational twist per variable
  std::vector<std::string> sigma;       // per variable, exponents separated by ':'
  std::vector<int> criteria;            // selftest subset
};

std::vector<std::string> cli_commands();

struct RunResult {
  int exit_code = kExitOk;
  Json report;
};

// Runs one job; never throws. Errors are reported in the JSON and exit code.
RunResult run_job(const JobConfig& config);

// Structural check of a report against the schema for its command; returns
// the first violation or an empty string.
std::string validate_report(const Json& report);

// Text rendering of a report.
std::string render_text(const Json& report);

// Full command line: parses flags, runs, writes the report. Returns the exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lognabla
