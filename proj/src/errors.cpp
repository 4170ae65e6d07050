#include "pc/errors.hpp"

namespace pc {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::bad_spec: return "bad_spec";
    case Errc::parse_error: return "parse_error";
    case Errc::duplicate_value: return "duplicate_value";
    case Errc::zero_denominator: return "zero_denominator";
    case Errc::perfect_square_d: return "perfect_square_d";
    case Errc::precision_exhausted: return "precision_exhausted";
    case Errc::digit_stream_exhausted: return "digit_stream_exhausted";
    case Errc::bit_budget_exceeded: return "bit_budget_exceeded";
    case Errc::cap_exceeded: return "cap_exceeded";
    case Errc::invariant_violation: return "invariant_violation";
    case Errc::incomplete_column: return "incomplete_column";
    case Errc::precondition_unmet: return "precondition_unmet";
    case Errc::grid_too_large: return "grid_too_large";
    case Errc::bracketing_failed: return "bracketing_failed";
    case Errc::internal_mismatch: return "internal_mismatch";
  }
  return "unknown";
}

}  // namespace pc
