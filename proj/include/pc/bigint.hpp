#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace pc {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned bits) { return BigInt(1) << bits; }

inline unsigned bit_length(const BigInt& v) {
  return v.is_zero() ? 0u : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1u;
}

// floor(sqrt(v)), v >= 0
inline BigInt isqrt(const BigInt& v) { return boost::multiprecision::sqrt(v); }

// Floor/ceil division for any sign of b (cpp_int's operator/ truncates).
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt ceil_div(const BigInt& a, const BigInt& b);

BigInt floor_rat(const Rat& r);
BigInt ceil_rat(const Rat& r);

inline BigInt numer(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rat& r) { return boost::multiprecision::denominator(r); }

double to_double(const BigInt& v);
double to_double(const Rat& r);

// Throws Errc::bad_spec when out of range.
std::uint64_t to_u64(const BigInt& v);
std::size_t to_size(const BigInt& v);

// Accepts "3/4", "-1/2", "0.25", "2", "1e-3".
Rat parse_rat(std::string_view text);
BigInt parse_bigint(std::string_view text);

std::string rat_string(const Rat& r);

}  // namespace pc
