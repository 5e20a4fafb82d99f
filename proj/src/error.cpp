#include "clumplab/error.hpp"

namespace clumplab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::divergent_log_integral: return "divergent-log-integral";
    case ErrorKind::cannot_carve: return "cannot-carve";
    case ErrorKind::invalid_weight: return "invalid-weight";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::hypothesis_not_met: return "hypothesis-not-met";
  }
  return "error";
}

}  // namespace clumplab
