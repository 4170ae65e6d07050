#include "pc/bigint.hpp"

#include <cctype>
#include <limits>

#include "pc/errors.hpp"

namespace pc {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  if (b.is_zero()) fail(Errc::zero_denominator, "division by zero");
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (!r.is_zero() && ((r < 0) != (b < 0))) --q;
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) { return -floor_div(-a, b); }

BigInt floor_rat(const Rat& r) { return floor_div(numer(r), denom(r)); }

BigInt ceil_rat(const Rat& r) { return ceil_div(numer(r), denom(r)); }

double to_double(const BigInt& v) { return v.convert_to<double>(); }

double to_double(const Rat& r) {
  // cpp_rational -> double conversion is exact-rounded only for small
  // operands; split manually to stay accurate for huge numerators.
  const BigInt& n = numer(r);
  const BigInt& d = denom(r);
  if (n.is_zero()) return 0.0;
  long shift = static_cast<long>(bit_length(n)) - static_cast<long>(bit_length(d));
  // scale so the quotient lands near 2^64, then divide as doubles
  long adjust = 64 - shift;
  BigInt sn = n, sd = d;
  if (adjust > 0)
    sn <<= adjust;
  else if (adjust < 0)
    sd <<= -adjust;
  BigInt q = sn / sd;
  return q.convert_to<double>() * std::ldexp(1.0, static_cast<int>(-adjust));
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max()))
    fail(Errc::bad_spec, "value out of uint64 range");
  return v.convert_to<std::uint64_t>();
}

std::size_t to_size(const BigInt& v) {
  if (v < 0 || v > BigInt(std::numeric_limits<std::size_t>::max()))
    fail(Errc::bad_spec, "value out of size_t range");
  return v.convert_to<std::size_t>();
}

BigInt parse_bigint(std::string_view text) {
  if (text.empty()) fail(Errc::parse_error, "empty integer");
  try {
    return BigInt(std::string(text));
  } catch (const std::exception&) {
    fail(Errc::parse_error, "bad integer '" + std::string(text) + "'");
  }
}

Rat parse_rat(std::string_view text) {
  if (text.empty()) fail(Errc::parse_error, "empty number");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    BigInt n = parse_bigint(text.substr(0, slash));
    BigInt d = parse_bigint(text.substr(slash + 1));
    if (d.is_zero()) fail(Errc::zero_denominator, "zero denominator in '" + std::string(text) + "'");
    return Rat(n, d);
  }
  // decimal with optional exponent: [-]ddd[.ddd][e[-]dd]
  std::string s(text);
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(s.size() - dot - 1);
    s.erase(dot, 1);
  }
  if (s.empty() || s == "-" || s == "+") fail(Errc::parse_error, "bad number '" + std::string(text) + "'");
  BigInt mant = parse_bigint(s);
  Rat r(mant);
  BigInt tenpow(1);
  for (long i = 0; i < std::labs(exp10); ++i) tenpow *= 10;
  if (exp10 >= 0)
    r *= Rat(tenpow);
  else
    r /= Rat(tenpow);
  return r;
}

std::string rat_string(const Rat& r) {
  std::string out = numer(r).str();
  if (denom(r) != 1) {
    out += "/";
    out += denom(r).str();
  }
  return out;
}

}  // namespace pc
