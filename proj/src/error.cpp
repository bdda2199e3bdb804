#include "lognabla/error.hpp"

namespace lognabla {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::shape_mismatch: return "shape mismatch";
    case ErrorKind::insufficient_precision: return "insufficient precision";
    case ErrorKind::division_by_zero: return "division by exact zero";
    case ErrorKind::indeterminate_root: return "indeterminate root";
    case ErrorKind::exponent_outside_scope: return "exponent outside scope";
    case ErrorKind::inconsistent_eigenvalues: return "eigenvalue set inconsistent";
    case ErrorKind::precision_exhausted: return "precision exhausted";
    case ErrorKind::not_invertible: return "not invertible";
    case ErrorKind::integrability: return "integrability";
    case ErrorKind::out_of_domain: return "out of domain";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::depth_exhausted: return "depth exhausted";
    case ErrorKind::inconclusive: return "inconclusive";
    case ErrorKind::extraction_stalled: return "extraction stalled";
    case ErrorKind::not_expressible: return "not expressible";
    case ErrorKind::probe_exhaustion: return "probe exhaustion";
    case ErrorKind::internal_consistency: return "internal consistency";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::invalid_argument || kind == ErrorKind::shape_mismatch;
}

}  // namespace lognabla
