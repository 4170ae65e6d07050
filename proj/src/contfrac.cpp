#include "pc/contfrac.hpp"

#include <map>
#include <utility>

#include "pc/errors.hpp"

namespace pc {

namespace {

void push_digit(std::vector<BigInt>& digits, std::vector<Convergent>& conv, const BigInt& a) {
  const Convergent& c0 = conv[conv.size() - 1];
  const Convergent* cm1 = conv.size() >= 2 ? &conv[conv.size() - 2] : nullptr;
  BigInt p1 = a * c0.num + (cm1 ? cm1->num : BigInt(1));
  BigInt q1 = a * c0.den + (cm1 ? cm1->den : BigInt(0));
  digits.push_back(a);
  conv.push_back(Convergent{std::move(p1), std::move(q1)});
}

}  // namespace

ContinuedFraction ContinuedFraction::expand(const AlphaSpec& spec, std::size_t max_terms) {
  ContinuedFraction cf;
  cf.spec_ = spec;
  cf.conv_.push_back(Convergent{BigInt(0), BigInt(1)});

  if (auto* r = std::get_if<RationalAlpha>(&spec.value())) {
    // Euclid on den/num; spec construction already reduced alpha mod 1.
    BigInt num = r->num, den = r->den;
    while (!num.is_zero() && cf.digits_.size() < max_terms) {
      BigInt a = den / num;
      BigInt rem = den % num;
      push_digit(cf.digits_, cf.conv_, a);
      den = num;
      num = rem;
    }
    cf.terminated_ = num.is_zero();
    return cf;
  }

  if (auto* qv = std::get_if<QuadraticAlpha>(&spec.value())) {
    BigInt D = qv->d;
    BigInt s0 = isqrt(D);
    BigInt P = qv->p, Q = qv->q;
    // reduce mod 1
    BigInt whole = (Q > 0) ? floor_div(P + s0, Q) : -(floor_div(P + s0, -Q) + 1);
    P -= whole * Q;
    // normalize so Q divides D - P^2
    if ((D - P * P) % Q != 0) {
      BigInt aq = abs(Q);
      P *= aq;
      D *= Q * Q;
      Q *= aq;
      s0 = isqrt(D);
    }
    // state (P, Q) of the complete quotient (P + sqrt D)/Q; digits repeat
    // once a state repeats, after which the cycle is replayed
    std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
    while (cf.digits_.size() < max_terms) {
      if (cf.period_len_ > 0) {
        std::size_t i = cf.digits_.size();
        BigInt a = cf.digits_[cf.period_start_ + (i - cf.period_start_) % cf.period_len_];
        push_digit(cf.digits_, cf.conv_, a);
        continue;
      }
      P = -P;
      Q = (D - P * P) / Q;
      auto key = std::make_pair(P, Q);
      auto it = seen.find(key);
      if (it != seen.end()) {
        cf.period_start_ = it->second;
        cf.period_len_ = cf.digits_.size() - it->second;
        continue;
      }
      seen.emplace(key, cf.digits_.size());
      BigInt a = (Q > 0) ? floor_div(P + s0, Q) : -(floor_div(P + s0, -Q) + 1);
      push_digit(cf.digits_, cf.conv_, a);
      P -= a * Q;
    }
    return cf;
  }

  const auto& tail = std::get<CfTailAlpha>(spec.value());
  std::size_t avail = tail.digits.size();
  for (std::size_t i = 0; i < max_terms; ++i) {
    const BigInt* a;
    if (i < avail) {
      a = &tail.digits[i];
    } else if (tail.period > 0) {
      std::size_t base = avail - tail.period;
      a = &tail.digits[base + (i - base) % tail.period];
    } else {
      break;
    }
    push_digit(cf.digits_, cf.conv_, *a);
  }
  if (tail.period > 0 && !cf.digits_.empty()) {
    cf.period_start_ = avail - tail.period;
    cf.period_len_ = tail.period;
  }
  return cf;
}

std::vector<Convergent> ContinuedFraction::convergents(std::size_t count) const {
  if (count > conv_.size())
    fail(Errc::digit_stream_exhausted,
         "only " + std::to_string(conv_.size()) + " convergents available, " +
             std::to_string(count) + " requested");
  return std::vector<Convergent>(conv_.begin(), conv_.begin() + count);
}

bool ContinuedFraction::can_extend() const {
  if (terminated_) return false;
  if (auto* tail = std::get_if<CfTailAlpha>(&spec_.value()))
    return tail->period > 0 || digits_.size() < tail->digits.size();
  return true;
}

ContinuedFraction ContinuedFraction::extended(std::size_t additional_terms) const {
  return expand(spec_, digits_.size() + additional_terms);
}

ScaleLocation locate_scale(const ContinuedFraction& cf, const BigInt& m) {
  if (m < 1) fail(Errc::bad_spec, "scale M must be >= 1");
  ContinuedFraction work = cf;
  // Need q_{l+1} > M for the bracket; q grows at least like Fibonacci.
  while (work.conv(work.conv_count() - 1).den <= m) {
    if (!work.can_extend())
      fail(Errc::digit_stream_exhausted,
           "digit stream ends before q exceeds M = " + m.str());
    std::size_t before = work.digits().size();
    work = work.extended(before + 16);
    if (work.digits().size() == before)
      fail(Errc::digit_stream_exhausted,
           "digit stream ends before q exceeds M = " + m.str());
  }
  // largest l with q_l <= m < q_{l+1}
  std::size_t l = 0;
  for (std::size_t i = work.conv_count() - 1; i > 0; --i) {
    if (work.conv(i - 1).den <= m && m < work.conv(i).den) {
      l = i - 1;
      break;
    }
  }
  ScaleLocation loc;
  loc.m = m;
  loc.l = l;
  loc.q = work.conv(l).den;
  loc.q_prev = (l == 0) ? BigInt(0) : work.conv(l - 1).den;
  loc.a = work.digits()[l];  // a_{l+1}
  loc.b = floor_div(m, loc.q);
  loc.l_even = (l % 2 == 0);
  loc.b_at_quotient = (loc.b >= loc.a);
  return loc;
}

}  // namespace pc
