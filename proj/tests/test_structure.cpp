#include <doctest.h>

#include <random>

#include "pc/energy.hpp"
#include "pc/errors.hpp"
#include "pc/structure.hpp"

using namespace pc;

namespace {

SequencePrefix gen(const char* spec, std::size_t n, std::uint64_t seed = 0) {
  return generate(GeneratorSpec::parse(spec), n, seed);
}

}  // namespace

TEST_CASE("an arithmetic progression certifies itself") {
  auto p = gen("ap:2,3", 64);
  auto cert = detect_quasi_arithmetic(p, Rat(1), Rat(1), 8);
  REQUIRE(cert.has_value());
  CHECK(cert->ap_offset == 2);
  CHECK(cert->ap_step == 3);
  CHECK(cert->member_indices.size() == 64);
  CHECK(verify_certificate(p, *cert));
  CHECK(cert->normalized());
}

TEST_CASE("the identity sequence certifies with h=1, k=1") {
  auto p = gen("id", 100);
  auto cert = detect_quasi_arithmetic(p, Rat(1), Rat(1), 4);
  REQUIRE(cert.has_value());
  CHECK(cert->ap_offset == 1);
  CHECK(cert->ap_step == 1);
}

TEST_CASE("squares at the acceptance parameters yield none") {
  auto p = gen("squares", 1000);
  auto cert = detect_quasi_arithmetic(p, Rat(1, 2), Rat(4), 100);
  CHECK_FALSE(cert.has_value());
}

TEST_CASE("union of two progressions certifies at its construction parameters") {
  auto p = gen("aps:1,6+3,6", 300);
  // values all odd: inside {1 + 2r}, density 1: c=1 needs window 3N...
  // both progressions have common difference 6 and offsets 2 apart: the
  // union is half of the odd lattice, c=1 at K=3 via k=2
  auto cert = detect_quasi_arithmetic(p, Rat(1), Rat(3), 8);
  REQUIRE(cert.has_value());
  CHECK(verify_certificate(p, *cert));
}

TEST_CASE("detector result is invariant under affine maps") {
  auto base = gen("aps:1,6+3,6", 200);
  auto c0 = detect_quasi_arithmetic(base, Rat(1), Rat(3), 8);
  REQUIRE(c0.has_value());
  for (auto [u, t] : std::vector<std::pair<long, long>>{{3, 5}, {2, 0}, {5, 17}}) {
    SequencePrefix mapped;
    for (const auto& v : base.values) mapped.values.push_back(u * v + t);
    mapped.sorted_increasing = true;
    mapped.label = "affine";
    auto c1 = detect_quasi_arithmetic(mapped, Rat(1), Rat(3), 8);
    REQUIRE(c1.has_value());
    CHECK(c1->c == c0->c);
    CHECK(c1->k_factor == c0->k_factor);
    CHECK(verify_certificate(mapped, *c1));
  }
}

TEST_CASE("certificates imply the energy floor c^4 N^3 / (2 Gamma)") {
  for (const char* spec : {"id", "ap:5,7", "aps:1,6+3,6", "density:0.5"}) {
    auto p = gen(spec, 400, 11);
    Rat c(1, 2);
    Rat K(2);
    auto cert = detect_quasi_arithmetic(p, c, K, 8);
    if (!cert) continue;
    auto prof = additive_energy(p);
    // E * 2 * L_P >= c^4 * N^4  (using the certificate's own Gamma = L_P/N)
    BigInt n(p.size());
    Rat lhs = Rat(prof.energy) * 2 * Rat(cert->ap_length);
    Rat rhs = c * c * c * c * Rat(n * n * n * n);
    CHECK(lhs >= rhs);
  }
}

TEST_CASE("close pair counting is strict") {
  std::vector<Rat> pts = {Rat(0), Rat(1, 2), Rat(1)};
  CHECK(count_close_pairs(pts, Rat(1, 2)) == 0);  // distances exactly tau excluded
  CHECK(count_close_pairs(pts, Rat(51, 100)) == 4);
  std::vector<Rat> same(7, Rat(1, 3));
  CHECK(count_close_pairs(same, Rat(1, 10)) == 42);  // complete graph
}

TEST_CASE("interval crowding at the extremal configuration") {
  // sigma copies at each lattice point j*tau, j = 0..B/tau
  CrowdingConfig cfg;
  cfg.tau = Rat(1, 4);
  cfg.length = Rat(1, 2);
  cfg.sigma = 2;
  std::vector<Rat> pts;
  for (int j = 0; j <= 2; ++j)
    for (int copy = 0; copy < 2; ++copy) pts.push_back(Rat(j, 4));
  auto res = check_interval_crowding(cfg, pts);
  CHECK(res.close_pairs == 6);
  CHECK(res.bound == Rat(4));
  CHECK(res.holds);
}

TEST_CASE("interval crowding rejects configs outside its hypotheses") {
  CrowdingConfig cfg;
  cfg.tau = Rat(1, 4);
  cfg.length = Rat(1, 2);
  cfg.sigma = 2;
  std::vector<Rat> five(5, Rat(0));
  CHECK_THROWS_AS((void)check_interval_crowding(cfg, five), Error);  // wrong L
  cfg.sigma = 1;
  std::vector<Rat> three(3, Rat(0));
  CHECK_THROWS_AS((void)check_interval_crowding(cfg, three), Error);  // sigma < 2
  CrowdingConfig odd;
  odd.tau = Rat(1, 3);
  odd.length = Rat(1, 2);  // B/tau = 3/2 not integral
  odd.sigma = 2;
  std::vector<Rat> pts(5, Rat(0));
  CHECK_THROWS_AS((void)check_interval_crowding(odd, pts), Error);
}

TEST_CASE("interval crowding holds on random configurations") {
  std::mt19937_64 rng(17);
  for (int inst = 0; inst < 1000; ++inst) {
    CrowdingConfig cfg;
    std::uint64_t ratio = 2 + rng() % 10;
    cfg.tau = Rat(1, 1 + static_cast<long>(rng() % 30));
    cfg.length = Rat(BigInt(ratio)) * cfg.tau;
    cfg.sigma = BigInt(2 + rng() % 5);
    std::size_t L = to_size((BigInt(ratio) + 1) * cfg.sigma);
    std::vector<Rat> pts;
    for (std::size_t j = 0; j < L; ++j)
      pts.push_back(cfg.length * Rat(BigInt(rng() % 4096), 4096));
    auto res = check_interval_crowding(cfg, pts);
    CHECK(res.holds);
  }
}

TEST_CASE("split crowding: all mass in one interval and uniform spread") {
  Rat tau(1, 4), length(1, 2);
  // q=2, psi=3: total (B/tau+1)*2*3 = 18 points
  std::vector<std::vector<Rat>> one_sided(2);
  for (int j = 0; j < 18; ++j) one_sided[0].push_back(Rat(j % 3, 8));
  auto res = check_split_crowding(length, tau, one_sided);
  CHECK(res.holds);
  std::vector<std::vector<Rat>> spread(2);
  for (int j = 0; j < 18; ++j) spread[j % 2].push_back(Rat(j % 3, 8));
  auto res2 = check_split_crowding(length, tau, spread);
  CHECK(res2.holds);
  CHECK(res2.close_pairs >= to_u64(ceil_rat(res2.bound)));
}

TEST_CASE("split crowding refuses psi < 3") {
  Rat tau(1, 4), length(1, 2);
  std::vector<std::vector<Rat>> pts(2);
  for (int j = 0; j < 12; ++j) pts[0].push_back(Rat(1, 8));  // psi = 2
  CHECK_THROWS_AS((void)check_split_crowding(length, tau, pts), Error);
}

TEST_CASE("split crowding holds on random configurations") {
  std::mt19937_64 rng(18);
  for (int inst = 0; inst < 1000; ++inst) {
    std::uint64_t ratio = 2 + rng() % 6;
    Rat tau(1, 1 + static_cast<long>(rng() % 12));
    Rat length = Rat(BigInt(ratio)) * tau;
    std::size_t q = 1 + rng() % 5;
    std::uint64_t psi = 3 + rng() % 3;
    std::size_t total = to_size(BigInt((ratio + 1) * q * psi));
    std::vector<std::vector<Rat>> iv(q);
    for (std::size_t j = 0; j < total; ++j)
      iv[rng() % q].push_back(length * Rat(BigInt(rng() % 4096), 4096));
    CHECK(check_split_crowding(length, tau, iv).holds);
  }
}

TEST_CASE("frequent small gap: worked example at rho = 1") {
  std::vector<BigInt> gaps = {1, 1, 2};
  FrequentGapOptions opts;
  opts.min_total = BigInt(4);
  auto res = most_frequent_small_gap(gaps, Rat(1), BigInt(4), opts);
  CHECK(res.value == 1);
  CHECK(res.multiplicity == 2);
  CHECK(res.required == Rat(1));
  CHECK(res.holds);
}

TEST_CASE("frequent small gap: all-ones input") {
  Rat rho(1, 2);
  BigInt total = 64;  // = 16/rho^2
  BigInt want = ceil_rat(rho * Rat(total)) - 1;
  std::vector<BigInt> gaps(to_size(want), BigInt(1));
  auto res = most_frequent_small_gap(gaps, rho, total);
  CHECK(res.multiplicity == gaps.size());
  CHECK(res.holds);
}

TEST_CASE("frequent small gap holds on random precondition-satisfying instances") {
  std::mt19937_64 rng(19);
  for (int inst = 0; inst < 1000; ++inst) {
    Rat rho(1 + static_cast<long>(rng() % 8), 8);
    BigInt total = ceil_rat(Rat(16) / (rho * rho)) + BigInt(rng() % 300);
    BigInt want = ceil_rat(rho * Rat(total)) - 1;
    std::size_t count = to_size(want);
    std::vector<BigInt> gaps(count, BigInt(1));
    BigInt budget = total - BigInt(count);
    // spread the slack to adversarially diversify values
    for (std::size_t j = 0; j < count && budget > 0; ++j) {
      BigInt add(rng() % 4);
      if (add > budget) add = budget;
      gaps[j] += add;
      budget -= add;
    }
    auto res = most_frequent_small_gap(gaps, rho, total);
    CHECK(res.holds);
    CHECK(Rat(res.value) <= Rat(4) / (rho * rho));
  }
}

TEST_CASE("frequent small gap precondition errors") {
  std::vector<BigInt> gaps = {1, 1, 2};
  CHECK_THROWS_AS((void)most_frequent_small_gap(gaps, Rat(1), BigInt(4)), Error);  // below floor
  FrequentGapOptions opts;
  opts.min_total = BigInt(0);
  std::vector<BigInt> wrong = {1, 1};
  CHECK_THROWS_AS((void)most_frequent_small_gap(wrong, Rat(1), BigInt(4), opts), Error);
  std::vector<BigInt> oversum = {3, 3, 3};
  CHECK_THROWS_AS((void)most_frequent_small_gap(oversum, Rat(1), BigInt(4), opts), Error);
}
