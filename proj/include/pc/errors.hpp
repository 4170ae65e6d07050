#pragma once

#include <stdexcept>
#include <string>

namespace pc {

// Machine-readable failure categories; the CLI maps these onto exit codes.
enum class Errc {
  bad_spec = 1,
  parse_error,
  duplicate_value,
  zero_denominator,
  perfect_square_d,
  precision_exhausted,
  digit_stream_exhausted,
  bit_budget_exceeded,
  cap_exceeded,
  invariant_violation,
  incomplete_column,
  precondition_unmet,
  grid_too_large,
  bracketing_failed,
  internal_mismatch,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace pc
