#pragma once

// Exact representations of the rotation number alpha and error-bounded
// evaluation of fractional parts {a_n * alpha} on the unit circle.
//
// Alpha is always held exactly (rational, quadratic surd, or continued
// fraction digit stream); floating point input is rejected by design, since
// downstream pair thresholds reach 1e-7 and silent drift would corrupt
// counts. Fixed-point projections carry an explicit error bound.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pc/bigint.hpp"

namespace pc {

struct RationalAlpha {
  BigInt num;  // reduced mod 1: gcd(num, den) = 1, 0 <= num < den
  BigInt den;
};

// (p + sqrt(d)) / q with d > 0 not a perfect square, q != 0.
// The value is reduced mod 1 when resolved.
struct QuadraticAlpha {
  BigInt p;
  BigInt q;
  BigInt d;
};

// [0; a_1, a_2, ...] with all a_i >= 1. If period > 0, the final `period`
// digits repeat forever (a quadratic irrational); period == 0 means the list
// is a finite truncation of an unknown irrational, and operations that need
// digits beyond the list raise digit_stream_exhausted.
struct CfTailAlpha {
  std::vector<BigInt> digits;
  std::size_t period = 0;
};

class AlphaSpec {
 public:
  using Variant = std::variant<RationalAlpha, QuadraticAlpha, CfTailAlpha>;

  static AlphaSpec rational(BigInt num, BigInt den);
  static AlphaSpec quadratic(BigInt p, BigInt q, BigInt d);
  static AlphaSpec cf_digits(std::vector<BigInt> digits, std::size_t period = 0);

  // Grammar: `rat:p/q`, `quad:P,Q,D`, `cf:a1,a2,...[;period]`.
  // Example: quad:1,2,5 is the golden ratio (1+sqrt 5)/2 mod 1.
  static AlphaSpec parse(std::string_view text);
  std::string to_string() const;

  const Variant& value() const { return v_; }
  bool is_rational() const { return std::holds_alternative<RationalAlpha>(v_); }
  bool is_quadratic() const { return std::holds_alternative<QuadraticAlpha>(v_); }
  bool is_cf() const { return std::holds_alternative<CfTailAlpha>(v_); }

 private:
  explicit AlphaSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// A point on [0,1) snapped to the canonical 64-bit counting grid:
// position = ticks / 2^64. `err` bounds the circle distance between the
// represented position and the true value.
struct CirclePoint {
  std::uint64_t ticks = 0;
  double err = 0.0;

  double position() const;
  friend bool operator<(const CirclePoint& a, const CirclePoint& b) { return a.ticks < b.ticks; }
  friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.ticks == b.ticks; }
};

// alpha mod 1 as scaled_value / 2^B with a tracked exact error bound.
class FixedAlpha {
 public:
  FixedAlpha(BigInt scaled, int precision_bits, Rat error_bound, AlphaSpec spec);

  const BigInt& scaled_value() const { return scaled_; }
  int precision_bits() const { return bits_; }
  const Rat& error_bound() const { return err_; }
  const AlphaSpec& spec() const { return spec_; }

  double value() const;

  // (term * scaled_value) mod 2^B, i.e. {term * alpha} at full precision.
  BigInt scaled_frac(const BigInt& term) const;

 private:
  BigInt scaled_;
  int bits_;
  Rat err_;
  AlphaSpec spec_;
};

// Default precision policy: B = 64 + bitlen(max term) + bitlen(N) + 16.
int recommended_precision_bits(const BigInt& max_term, const BigInt& n_terms);

// Fixed-point alpha mod 1 with error_bound <= 2^(1-B). For the quadratic
// variant sqrt(D) is computed by integer square root of D * 4^B.
FixedAlpha resolve_alpha(const AlphaSpec& spec, int precision_bits);

// {term * alpha} snapped to the 64-bit grid. Requires
// term * error_bound(alpha) < 2^-64, else precision_exhausted.
CirclePoint frac_part(const FixedAlpha& alpha, const BigInt& term);
std::vector<CirclePoint> frac_parts(const FixedAlpha& alpha, std::span<const BigInt> terms);

// min(|x-y|, 1-|x-y|), the distance to the nearest integer of x - y.
double circle_distance(const CirclePoint& x, const CirclePoint& y);
std::uint64_t circle_distance_ticks(std::uint64_t x, std::uint64_t y);

}  // namespace pc
