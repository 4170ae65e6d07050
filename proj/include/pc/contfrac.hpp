#pragma once

// Continued fraction expansion of alpha, convergents p_l/q_l, and location of
// a scale M between best-approximation denominators q_l <= M < q_{l+1}.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pc/alpha.hpp"
#include "pc/bigint.hpp"

namespace pc {

struct Convergent {
  BigInt num;  // p_l
  BigInt den;  // q_l
};

class ContinuedFraction {
 public:
  // Expands alpha = [0; a_1, a_2, ...] to at most max_terms digits.
  // Rationals use the Euclidean algorithm and terminate naturally; quadratic
  // surds use the exact integer recurrence on (P, Q) with D fixed, detecting
  // the period by state repetition; digit-list specs replay their digits.
  static ContinuedFraction expand(const AlphaSpec& spec, std::size_t max_terms);

  const AlphaSpec& spec() const { return spec_; }
  const std::vector<BigInt>& digits() const { return digits_; }

  // conv(l) = (p_l, q_l) with conv(0) = (0, 1); defined for l <= digits().size().
  const Convergent& conv(std::size_t l) const { return conv_[l]; }
  std::size_t conv_count() const { return conv_.size(); }

  // First `count` convergents (l = 0 .. count-1).
  std::vector<Convergent> convergents(std::size_t count) const;

  bool periodic() const { return period_len_ > 0; }
  std::size_t period_start() const { return period_start_; }
  std::size_t period_len() const { return period_len_; }

  // True when the expansion ended because alpha is rational.
  bool terminated() const { return terminated_; }
  // True when more digits could be produced by a longer expansion.
  bool can_extend() const;

  ContinuedFraction extended(std::size_t additional_terms) const;

 private:
  ContinuedFraction() = default;
  AlphaSpec spec_ = AlphaSpec::rational(0, 1);
  std::vector<BigInt> digits_;
  std::vector<Convergent> conv_;
  std::size_t period_start_ = 0;
  std::size_t period_len_ = 0;
  bool terminated_ = false;
};

// The triple locating M between convergent denominators: q = q_l <= M <
// q_{l+1}, a = a_{l+1}, and b = floor(M / q), so b*q <= M < (b+1)*q.
// Usually 1 <= b < a; when partial quotients equal 1 no such b exists, so
// b == a is allowed and flagged via b_at_quotient.
struct ScaleLocation {
  BigInt m;
  std::size_t l = 0;
  BigInt q;       // q_l
  BigInt q_prev;  // q_{l-1}
  BigInt a;       // a_{l+1}
  BigInt b;
  bool l_even = true;
  bool b_at_quotient = false;
};

// Extends the expansion as needed; digit_stream_exhausted when the digit
// stream genuinely ends before q_{l+1} > M is reached.
ScaleLocation locate_scale(const ContinuedFraction& cf, const BigInt& m);

}  // namespace pc
