#include "pc/structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "pc/energy.hpp"
#include "pc/errors.hpp"

namespace pc {

bool QuasiArithCertificate::normalized() const {
  Rat g = gamma(), G = cap_gamma();
  return c <= g && g <= 4 * c && k_factor / 4 <= G && G <= k_factor;
}

bool verify_certificate(const SequencePrefix& prefix, const QuasiArithCertificate& cert) {
  if (cert.degree != 1 || cert.ap_step < 1 || cert.ap_length < 1) return false;
  if (cert.n != prefix.size()) return false;
  if (Rat(cert.ap_length) > cert.k_factor * Rat(BigInt(cert.n))) return false;
  if (Rat(BigInt(cert.member_indices.size())) < cert.c * Rat(BigInt(cert.n))) return false;
  std::set<std::size_t> seen;
  for (std::size_t idx : cert.member_indices) {
    if (idx >= prefix.size() || !seen.insert(idx).second) return false;
    const BigInt& v = prefix.values[idx];
    BigInt off = v - cert.ap_offset;
    if (off < 0 || off % cert.ap_step != 0) return false;
    if (off / cert.ap_step >= cert.ap_length) return false;
  }
  return true;
}

std::optional<QuasiArithCertificate> detect_quasi_arithmetic(const SequencePrefix& prefix,
                                                             const Rat& c, const Rat& k_factor,
                                                             std::size_t k_max) {
  if (!prefix.sorted_increasing) fail(Errc::bad_spec, "detector needs a strictly increasing prefix");
  if (c <= 0 || c > 1 || k_factor < 1) fail(Errc::bad_spec, "want 0 < c <= 1 and K >= 1");
  const std::size_t n = prefix.size();
  const BigInt len = floor_rat(k_factor * Rat(BigInt(n)));  // L_P
  const BigInt need = ceil_rat(c * Rat(BigInt(n)));         // minimum members

  // candidate steps: 1..k_max plus the 20 most frequent positive differences
  std::set<BigInt> steps;
  for (std::size_t k = 1; k <= k_max; ++k) steps.insert(BigInt(k));
  if (n <= 10000) {
    EnergyOptions eo;
    eo.max_n = n;
    auto prof = difference_profile(prefix, eo);
    std::vector<std::pair<std::uint64_t, BigInt>> by_count;
    for (const auto& [v, cnt] : prof.diff_counts) by_count.emplace_back(cnt, v);
    std::sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t i = 0; i < by_count.size() && i < 20; ++i)
      if (by_count[i].second >= 1) steps.insert(by_count[i].second);
  }

  for (const BigInt& k : steps) {
    // bucket members by residue class mod k, keeping prefix order
    std::map<BigInt, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < n; ++i) {
      BigInt r = prefix.values[i] % k;
      classes[r].push_back(i);
    }
    for (const auto& [res, members] : classes) {
      if (BigInt(members.size()) < need) continue;
      // ranks are increasing with the values; densest window of `len`
      // consecutive progression terms via two pointers
      std::vector<BigInt> ranks;
      ranks.reserve(members.size());
      for (std::size_t idx : members) ranks.push_back((prefix.values[idx] - res) / k);
      std::size_t lo = 0;
      std::size_t best_count = 0;
      std::size_t best_lo = 0;
      for (std::size_t hi = 0; hi < ranks.size(); ++hi) {
        while (ranks[hi] - ranks[lo] >= len) ++lo;
        if (hi - lo + 1 > best_count) {
          best_count = hi - lo + 1;
          best_lo = lo;
        }
      }
      if (BigInt(best_count) < need) continue;
      QuasiArithCertificate cert;
      cert.c = c;
      cert.k_factor = k_factor;
      cert.n = n;
      cert.ap_step = k;
      cert.ap_offset = res + ranks[best_lo] * k;
      cert.ap_length = len;
      for (std::size_t i = best_lo; i < ranks.size(); ++i) {
        if (ranks[i] - ranks[best_lo] >= len) break;
        cert.member_indices.push_back(members[i]);
      }
      std::sort(cert.member_indices.begin(), cert.member_indices.end());
      if (!verify_certificate(prefix, cert))
        fail(Errc::internal_mismatch, "detector produced an invalid certificate");
      return cert;
    }
  }
  return std::nullopt;
}

std::uint64_t count_close_pairs(std::span<const Rat> points, const Rat& tau) {
  if (tau <= 0) fail(Errc::bad_spec, "tau must be positive");
  std::vector<Rat> xs(points.begin(), points.end());
  std::sort(xs.begin(), xs.end());
  std::uint64_t unordered = 0;
  std::size_t lo = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    while (xs[j] - xs[lo] >= tau) ++lo;
    unordered += j - lo;
  }
  return 2 * unordered;
}

namespace {

void check_interval_niceness(const Rat& length, const Rat& tau) {
  if (length <= 0 || tau <= 0) fail(Errc::precondition_unmet, "need B > 0 and tau > 0");
  if (tau > length / 2) fail(Errc::precondition_unmet, "need tau <= B/2");
  Rat ratio = length / tau;
  if (denom(ratio) != 1) fail(Errc::precondition_unmet, "need B/tau integral");
}

}  // namespace

CrowdingResult check_interval_crowding(const CrowdingConfig& config, std::span<const Rat> points) {
  check_interval_niceness(config.length, config.tau);
  if (config.sigma < 2) fail(Errc::precondition_unmet, "need sigma >= 2");
  BigInt expect = (numer(config.length / config.tau) + 1) * config.sigma;
  if (BigInt(points.size()) != expect)
    fail(Errc::precondition_unmet,
         "need exactly (B/tau + 1)*sigma = " + expect.str() + " points, got " +
             std::to_string(points.size()));
  // closed right endpoint: the extremal lattice configuration ends at B
  for (const Rat& x : points)
    if (x < 0 || x > config.length) fail(Errc::precondition_unmet, "points must lie in [0, B]");
  CrowdingResult res;
  res.close_pairs = count_close_pairs(points, config.tau);
  res.bound = config.sigma * config.sigma * config.length / (2 * config.tau);
  res.holds = Rat(BigInt(res.close_pairs)) >= res.bound;
  return res;
}

CrowdingResult check_split_crowding(const Rat& length, const Rat& tau,
                                    std::span<const std::vector<Rat>> interval_points) {
  check_interval_niceness(length, tau);
  if (interval_points.empty()) fail(Errc::precondition_unmet, "need at least one interval");
  BigInt total = 0;
  for (const auto& pts : interval_points) total += BigInt(pts.size());
  const BigInt q(interval_points.size());
  Rat per = Rat(total) / ((length / tau + 1) * Rat(q));  // psi
  if (per < 3) fail(Errc::precondition_unmet, "need psi >= 3, got " + rat_string(per));
  CrowdingResult res;
  for (const auto& pts : interval_points) {
    for (const Rat& x : pts)
      if (x < 0 || x > length) fail(Errc::precondition_unmet, "points must lie in [0, B]");
    res.close_pairs += count_close_pairs(pts, tau);
  }
  res.bound = length * Rat(q) * (per - 2) * (per - 2) / (2 * tau);
  res.holds = Rat(BigInt(res.close_pairs)) >= res.bound;
  return res;
}

FrequentGapResult most_frequent_small_gap(std::span<const BigInt> gaps, const Rat& rho,
                                          const BigInt& total, const FrequentGapOptions& opts) {
  if (rho <= 0 || rho > 1) fail(Errc::precondition_unmet, "need rho in (0, 1]");
  BigInt floor_total = opts.min_total.value_or(ceil_rat(Rat(16) / (rho * rho)));
  if (total < floor_total)
    fail(Errc::precondition_unmet,
         "total " + total.str() + " below the large-enough floor " + floor_total.str());
  BigInt expect_count = ceil_rat(rho * Rat(total)) - 1;
  if (BigInt(gaps.size()) != expect_count)
    fail(Errc::precondition_unmet, "need ceil(rho*A)-1 = " + expect_count.str() + " gaps, got " +
                                       std::to_string(gaps.size()));
  BigInt sum = 0;
  for (const BigInt& g : gaps) {
    if (g < 1) fail(Errc::precondition_unmet, "gaps must be positive integers");
    sum += g;
  }
  if (sum > total)
    fail(Errc::precondition_unmet, "gaps sum " + sum.str() + " exceeds the budget " + total.str());

  const Rat cutoff = Rat(4) / (rho * rho);
  std::map<BigInt, std::uint64_t> freq;
  for (const BigInt& g : gaps)
    if (Rat(g) <= cutoff) ++freq[g];
  FrequentGapResult res;
  res.required = rho * rho * Rat(total) / 4;
  for (const auto& [v, cnt] : freq) {
    if (cnt > res.multiplicity) {
      res.multiplicity = cnt;
      res.value = v;
    }
  }
  res.holds = Rat(BigInt(res.multiplicity)) >= res.required;
  return res;
}

}  // namespace pc
