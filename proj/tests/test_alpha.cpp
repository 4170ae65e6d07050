#include <doctest.h>

#include <cmath>
#include <random>

#include "pc/alpha.hpp"
#include "pc/errors.hpp"

using namespace pc;

namespace {

// 256-bit reference value of (p + sqrt(d))/q mod 1, for cross-checking lower
// precision resolutions
Rat surd_oracle(long p, long q, long d) {
  FixedAlpha hi = resolve_alpha(AlphaSpec::quadratic(p, q, d), 256);
  return Rat(hi.scaled_value(), pow2(256));
}

}  // namespace

TEST_CASE("dyadic rational resolves exactly") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("rat:5/8"), 64);
  CHECK(a.error_bound() == 0);
  CHECK(Rat(a.scaled_value(), pow2(64)) == Rat(5, 8));
}

TEST_CASE("non-dyadic rational carries its exact error") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("rat:1/3"), 96);
  CHECK(a.error_bound() > 0);
  CHECK(a.error_bound() < Rat(1, pow2(95)));
  CHECK(Rat(a.scaled_value(), pow2(96)) + a.error_bound() == Rat(1, 3));
}

TEST_CASE("rational spec reduces mod 1") {
  FixedAlpha a = resolve_alpha(AlphaSpec::rational(13, 8), 64);
  CHECK(Rat(a.scaled_value(), pow2(64)) == Rat(5, 8));
  FixedAlpha b = resolve_alpha(AlphaSpec::rational(-3, 8), 64);
  CHECK(Rat(b.scaled_value(), pow2(64)) == Rat(5, 8));
}

TEST_CASE("golden ratio at 128 bits matches the 256-bit oracle") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("quad:1,2,5"), 128);
  CHECK(std::abs(a.value() - 0.6180339887498949) < 1e-15);
  CHECK(a.error_bound() <= Rat(1, pow2(127)));
  Rat diff = surd_oracle(1, 2, 5) - Rat(a.scaled_value(), pow2(128));
  CHECK(abs(numer(diff)) * pow2(126) <= denom(diff));  // |diff| <= 2^-126
}

TEST_CASE("sqrt2 mod 1 at 128 bits matches the oracle") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("quad:0,1,2"), 128);
  CHECK(std::abs(a.value() - 0.4142135623730951) < 1e-15);
  Rat diff = surd_oracle(0, 1, 2) - Rat(a.scaled_value(), pow2(128));
  CHECK(abs(numer(diff)) * pow2(126) <= denom(diff));
}

TEST_CASE("negative Q quadratic") {
  // (1 - sqrt 2)/1 = (-1 + sqrt 2)/(-1)... both forms agree mod 1
  FixedAlpha a = resolve_alpha(AlphaSpec::quadratic(-1, -1, 2), 128);
  FixedAlpha b = resolve_alpha(AlphaSpec::quadratic(1, 1, 2), 128);
  // 1 - sqrt2 mod 1 = 2 - sqrt2 mod 1; sqrt2 mod 1 = sqrt2 - 1; sum to 1
  Rat sum = Rat(a.scaled_value() + b.scaled_value(), pow2(128));
  CHECK(abs(numer(sum - 1)) * pow2(120) <= denom(sum - 1));
}

TEST_CASE("perfect square and zero denominator are rejected") {
  CHECK_THROWS_AS((void)AlphaSpec::quadratic(1, 2, 9), Error);
  CHECK_THROWS_AS((void)AlphaSpec::quadratic(1, 0, 5), Error);
  CHECK_THROWS_AS((void)AlphaSpec::rational(1, 0), Error);
}

TEST_CASE("cf digit stream resolves and exhausts") {
  // golden ratio as a periodic digit stream
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("cf:1;1"), 128);
  CHECK(std::abs(a.value() - 0.6180339887498949) < 1e-15);
  // short aperiodic truncation cannot reach 128 bits
  CHECK_THROWS_AS((void)resolve_alpha(AlphaSpec::parse("cf:1,2,3"), 128), Error);
}

TEST_CASE("frac_parts on an exact rational") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("rat:5/8"), 64);
  std::vector<BigInt> terms = {1, 2, 3};
  auto pts = frac_parts(a, terms);
  CHECK(pts[0].position() == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(pts[1].position() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(pts[2].position() == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("frac_parts golden 1..5 against the oracle") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("quad:1,2,5"), 192);
  std::vector<BigInt> terms = {1, 2, 3, 4, 5};
  auto pts = frac_parts(a, terms);
  double want[] = {0.6180339887, 0.2360679775, 0.8541019662, 0.4721359550, 0.0901699437};
  for (int i = 0; i < 5; ++i) CHECK(pts[i].position() == doctest::Approx(want[i]).epsilon(1e-9));
}

TEST_CASE("best approximation at a Fibonacci index") {
  // F_16 = 987: ||{987 phi}|| < 1/987
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("quad:1,2,5"), 192);
  CirclePoint p = frac_part(a, 987);
  CirclePoint zero{0, 0.0};
  CHECK(circle_distance(p, zero) < 1.0 / 987.0);
}

TEST_CASE("precision exhaustion reports instead of drifting") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("quad:1,2,5"), 64);
  CHECK_THROWS_AS((void)frac_part(a, BigInt(1) << 40), Error);
}

TEST_CASE("circle distance basics") {
  auto at = [](double x) {
    return CirclePoint{static_cast<std::uint64_t>(std::ldexp(x, 64)), 0.0};
  };
  CHECK(circle_distance(at(0.1), at(0.9)) == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(circle_distance(at(0.3), at(0.3)) == 0.0);
  CHECK(circle_distance(at(0.0), at(0.5)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("circle distance is symmetric, bounded, and triangular") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t x = rng(), y = rng(), z = rng();
    std::uint64_t dxy = circle_distance_ticks(x, y);
    CHECK(dxy == circle_distance_ticks(y, x));
    CHECK(dxy <= std::uint64_t(1) << 63);
    // exact on the tick grid, no floating point slack needed
    unsigned __int128 rhs = static_cast<unsigned __int128>(dxy) + circle_distance_ticks(y, z);
    CHECK(static_cast<unsigned __int128>(circle_distance_ticks(x, z)) <= rhs);
  }
}

TEST_CASE("frac part addition is consistent mod 1") {
  FixedAlpha a = resolve_alpha(AlphaSpec::parse("quad:0,1,2"), 192);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    BigInt k(1 + rng() % 100000), m(1 + rng() % 100000);
    std::uint64_t sum = frac_part(a, k).ticks + frac_part(a, m).ticks;
    std::uint64_t direct = frac_part(a, k + m).ticks;
    CHECK(circle_distance_ticks(sum, direct) <= 2);
  }
}

TEST_CASE("re-resolving at higher precision moves points at most the old bound") {
  AlphaSpec spec = AlphaSpec::parse("quad:3,7,13");
  FixedAlpha lo = resolve_alpha(spec, 96);
  FixedAlpha hi = resolve_alpha(spec, 192);
  for (long t : {1L, 17L, 12345L}) {
    CirclePoint a = frac_part(lo, t);
    CirclePoint b = frac_part(hi, t);
    CHECK(circle_distance(a, b) <= a.err);
  }
}

TEST_CASE("spec string round trip") {
  for (const char* s : {"rat:5/8", "quad:1,2,5", "cf:1,2,2;1"}) {
    CHECK(AlphaSpec::parse(s).to_string() == s);
  }
  CHECK_THROWS_AS((void)AlphaSpec::parse("bogus:1"), Error);
  CHECK_THROWS_AS((void)AlphaSpec::parse("0.61803"), Error);  // floats rejected by design
}
