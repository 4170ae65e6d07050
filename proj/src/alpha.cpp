#include "pc/alpha.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <utility>

#include "pc/errors.hpp"

namespace pc {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// floor((p + sqrt(d))/q) for non-square d, any sign of q, via s = floor(sqrt d).
BigInt floor_quadratic(const BigInt& p, const BigInt& q, const BigInt& s) {
  if (q > 0) return floor_div(p + s, q);
  // For irrational x, floor(x/q) with q<0 equals -(floor(x/|q|) + 1).
  return -(floor_div(p + s, -q) + 1);
}

}  // namespace

AlphaSpec AlphaSpec::rational(BigInt num, BigInt den) {
  if (den.is_zero()) fail(Errc::zero_denominator, "rational alpha with zero denominator");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  num -= floor_div(num, den) * den;  // reduce mod 1
  BigInt g = boost::multiprecision::gcd(num, den);
  if (!g.is_zero()) {
    num /= g;
    den /= g;
  }
  return AlphaSpec(Variant(RationalAlpha{std::move(num), std::move(den)}));
}

AlphaSpec AlphaSpec::quadratic(BigInt p, BigInt q, BigInt d) {
  if (q.is_zero()) fail(Errc::zero_denominator, "quadratic alpha with zero denominator");
  if (d <= 0) fail(Errc::bad_spec, "quadratic alpha requires d > 0");
  BigInt r = isqrt(d);
  if (r * r == d) fail(Errc::perfect_square_d, "d = " + d.str() + " is a perfect square");
  return AlphaSpec(Variant(QuadraticAlpha{std::move(p), std::move(q), std::move(d)}));
}

AlphaSpec AlphaSpec::cf_digits(std::vector<BigInt> digits, std::size_t period) {
  if (digits.empty()) fail(Errc::bad_spec, "empty continued fraction digit list");
  for (const BigInt& a : digits)
    if (a < 1) fail(Errc::bad_spec, "continued fraction digits must be >= 1");
  if (period > digits.size())
    fail(Errc::bad_spec, "declared period longer than the digit list");
  return AlphaSpec(Variant(CfTailAlpha{std::move(digits), period}));
}

AlphaSpec AlphaSpec::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    fail(Errc::parse_error, "alpha spec needs a 'rat:'/'quad:'/'cf:' prefix: '" + std::string(text) + "'");
  auto kind = text.substr(0, colon);
  auto body = text.substr(colon + 1);
  if (kind == "rat") {
    auto parts = split(body, '/');
    if (parts.size() != 2) fail(Errc::parse_error, "rat spec wants p/q: '" + std::string(text) + "'");
    return rational(parse_bigint(parts[0]), parse_bigint(parts[1]));
  }
  if (kind == "quad") {
    auto parts = split(body, ',');
    if (parts.size() != 3) fail(Errc::parse_error, "quad spec wants P,Q,D: '" + std::string(text) + "'");
    return quadratic(parse_bigint(parts[0]), parse_bigint(parts[1]), parse_bigint(parts[2]));
  }
  if (kind == "cf") {
    std::size_t period = 0;
    auto semi = body.find(';');
    if (semi != std::string_view::npos) {
      BigInt p = parse_bigint(body.substr(semi + 1));
      if (p < 1) fail(Errc::parse_error, "cf period must be >= 1");
      period = to_size(p);
      body = body.substr(0, semi);
    }
    std::vector<BigInt> digits;
    for (auto part : split(body, ',')) digits.push_back(parse_bigint(part));
    return cf_digits(std::move(digits), period);
  }
  fail(Errc::parse_error, "unknown alpha kind '" + std::string(kind) + "'");
}

std::string AlphaSpec::to_string() const {
  if (auto* r = std::get_if<RationalAlpha>(&v_))
    return "rat:" + r->num.str() + "/" + r->den.str();
  if (auto* q = std::get_if<QuadraticAlpha>(&v_))
    return "quad:" + q->p.str() + "," + q->q.str() + "," + q->d.str();
  const auto& cf = std::get<CfTailAlpha>(v_);
  std::string out = "cf:";
  for (std::size_t i = 0; i < cf.digits.size(); ++i) {
    if (i) out += ",";
    out += cf.digits[i].str();
  }
  if (cf.period) out += ";" + std::to_string(cf.period);
  return out;
}

double CirclePoint::position() const { return std::ldexp(static_cast<double>(ticks), -64); }

FixedAlpha::FixedAlpha(BigInt scaled, int precision_bits, Rat error_bound, AlphaSpec spec)
    : scaled_(std::move(scaled)), bits_(precision_bits), err_(std::move(error_bound)), spec_(std::move(spec)) {}

double FixedAlpha::value() const { return to_double(Rat(scaled_, pow2(static_cast<unsigned>(bits_)))); }

BigInt FixedAlpha::scaled_frac(const BigInt& term) const {
  BigInt full = term * scaled_;
  // mod 2^B
  full &= pow2(static_cast<unsigned>(bits_)) - 1;
  return full;
}

int recommended_precision_bits(const BigInt& max_term, const BigInt& n_terms) {
  return 64 + static_cast<int>(bit_length(max_term)) + static_cast<int>(bit_length(n_terms)) + 16;
}

FixedAlpha resolve_alpha(const AlphaSpec& spec, int precision_bits) {
  if (precision_bits < 64) fail(Errc::bad_spec, "precision_bits must be >= 64");
  const unsigned B = static_cast<unsigned>(precision_bits);
  const BigInt one = pow2(B);

  if (auto* r = std::get_if<RationalAlpha>(&spec.value())) {
    BigInt scaled = floor_div(r->num << B, r->den);
    Rat err = Rat(r->num, r->den) - Rat(scaled, one);  // exact, 0 for dyadic rationals
    return FixedAlpha(std::move(scaled), precision_bits, std::move(err), spec);
  }

  if (auto* qv = std::get_if<QuadraticAlpha>(&spec.value())) {
    BigInt s0 = isqrt(qv->d);
    BigInt whole = floor_quadratic(qv->p, qv->q, s0);  // floor(alpha), for mod-1 reduction
    BigInt p = qv->p - whole * qv->q;
    BigInt sB = isqrt(qv->d << (2 * B));  // floor(2^B sqrt d)
    BigInt scaled;
    if (qv->q > 0) {
      scaled = floor_div((p << B) + sB, qv->q);
    } else {
      scaled = -(floor_div((p << B) + sB, -qv->q) + 1);
    }
    // Two nested floors: |scaled - alpha*2^B| < 2. Snap into [0, 2^B).
    scaled &= one - 1;
    return FixedAlpha(std::move(scaled), precision_bits, Rat(2, one), spec);
  }

  const auto& cf = std::get<CfTailAlpha>(spec.value());
  // Walk convergents until 1/(q_l q_{l+1}) <= 2^-(B+1).
  BigInt pm1 = 1, qm1 = 0, p0 = 0, q0 = 1;
  const BigInt target = pow2(B + 1);
  std::size_t i = 0;
  while (true) {
    BigInt a;
    if (i < cf.digits.size()) {
      a = cf.digits[i];
    } else if (cf.period > 0) {
      std::size_t base = cf.digits.size() - cf.period;
      a = cf.digits[base + (i - base) % cf.period];
    } else {
      fail(Errc::digit_stream_exhausted,
           "cf digit list too short for " + std::to_string(precision_bits) + "-bit resolution");
    }
    BigInt p1 = a * p0 + pm1;
    BigInt q1 = a * q0 + qm1;
    pm1 = p0; qm1 = q0; p0 = p1; q0 = q1;
    ++i;
    if (qm1 * q0 >= target) break;
  }
  // alpha is within 1/(q_{l} q_{l+1}) of p_{l}/q_{l}; use the older of the pair.
  BigInt scaled = floor_div(pm1 << B, qm1);
  Rat err = Rat(1, qm1 * q0) + Rat(1, one);
  scaled &= one - 1;
  return FixedAlpha(std::move(scaled), precision_bits, std::move(err), spec);
}

CirclePoint frac_part(const FixedAlpha& alpha, const BigInt& term) {
  if (term <= 0) fail(Errc::bad_spec, "terms must be positive integers");
  const unsigned B = static_cast<unsigned>(alpha.precision_bits());
  Rat point_err = Rat(term) * alpha.error_bound();
  if (point_err >= Rat(1, pow2(64)))
    fail(Errc::precision_exhausted,
         "term " + term.str() + " needs more than " + std::to_string(B) +
             " bits; re-resolve alpha at >= " +
             std::to_string(recommended_precision_bits(term, term)) + " bits");
  BigInt full = alpha.scaled_frac(term);
  std::uint64_t ticks;
  if (B == 64) {
    ticks = to_u64(full);
  } else {
    BigInt rounded = (full + (BigInt(1) << (B - 65))) >> (B - 64);
    rounded &= pow2(64) - 1;  // exact 2^64 wraps to 0 on the circle
    ticks = to_u64(rounded);
  }
  // quantization adds at most 2^-65
  double err = to_double(point_err) * (1.0 + 1e-9) + 0x1.0p-64;
  return CirclePoint{ticks, err};
}

std::vector<CirclePoint> frac_parts(const FixedAlpha& alpha, std::span<const BigInt> terms) {
  std::vector<CirclePoint> out;
  out.reserve(terms.size());
  if (terms.empty()) return out;
  // one exact precondition check for the largest term; per-point error
  // bounds then come from cheap double arithmetic rounded upward
  const BigInt* max_term = &terms[0];
  for (const BigInt& t : terms) {
    if (t <= 0) fail(Errc::bad_spec, "terms must be positive integers");
    if (t > *max_term) max_term = &t;
  }
  if (Rat(*max_term) * alpha.error_bound() >= Rat(1, pow2(64)))
    fail(Errc::precision_exhausted,
         "term " + max_term->str() + " needs more precision; re-resolve alpha at >= " +
             std::to_string(recommended_precision_bits(*max_term, *max_term)) + " bits");
  const double err_alpha = to_double(alpha.error_bound()) * (1.0 + 1e-9) + 1e-300;
  const unsigned B = static_cast<unsigned>(alpha.precision_bits());
  const BigInt mask = pow2(B) - 1;
  const BigInt half = B > 64 ? BigInt(1) << (B - 65) : BigInt(0);
  const BigInt mask64 = pow2(64) - 1;
  for (const BigInt& t : terms) {
    BigInt full = (t * alpha.scaled_value()) & mask;
    std::uint64_t ticks;
    if (B == 64) {
      ticks = to_u64(full);
    } else {
      BigInt rounded = ((full + half) >> (B - 64)) & mask64;
      ticks = to_u64(rounded);
    }
    double err = to_double(t) * err_alpha * (1.0 + 1e-9) + 0x1.0p-64;
    out.push_back(CirclePoint{ticks, err});
  }
  return out;
}

std::uint64_t circle_distance_ticks(std::uint64_t x, std::uint64_t y) {
  std::uint64_t d = x - y;
  return std::min(d, std::uint64_t(0) - d);
}

double circle_distance(const CirclePoint& x, const CirclePoint& y) {
  return std::ldexp(static_cast<double>(circle_distance_ticks(x.ticks, y.ticks)), -64);
}

}  // namespace pc
