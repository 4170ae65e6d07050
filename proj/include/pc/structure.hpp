#pragma once

// Quasi-arithmetic degree-1 certificates and the elementary counting bounds
// used by the witness engine, all as executable, exactly-checked predicates.
//
// The detector is a sound-but-incomplete heuristic: a returned certificate is
// always verified valid; `nullopt` means the search failed, NOT that no
// certificate exists.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pc/bigint.hpp"
#include "pc/sequences.hpp"

namespace pc {

struct QuasiArithCertificate {
  Rat c;  // density constant in (0, 1]
  Rat k_factor;  // size constant K >= 1
  int degree = 1;
  std::size_t n = 0;  // prefix length the certificate covers

  BigInt ap_offset;  // h
  BigInt ap_step;    // k >= 1
  BigInt ap_length;  // L_P <= K*N, progression {h + r*k : 0 <= r < L_P}
  std::vector<std::size_t> member_indices;  // indices into the prefix, ascending

  Rat gamma() const { return Rat(BigInt(member_indices.size()), BigInt(n)); }
  Rat cap_gamma() const { return Rat(ap_length, BigInt(n)); }
  // The proof's normalized regime: c <= gamma <= 4c and K/4 <= Gamma <= K.
  bool normalized() const;
};

// Membership, cardinality, and size re-verified from scratch.
bool verify_certificate(const SequencePrefix& prefix, const QuasiArithCertificate& cert);

// Searches common differences k in {1..k_max} plus the most frequent
// absolute differences of the prefix; for each k and residue class, the
// densest window of floor(K*N) consecutive progression terms is tested for
// >= c*N prefix elements. First hit in (k ascending, h ascending) order.
std::optional<QuasiArithCertificate> detect_quasi_arithmetic(const SequencePrefix& prefix,
                                                             const Rat& c, const Rat& k_factor,
                                                             std::size_t k_max);

// ---- counting bounds ---------------------------------------------------

// Ordered pairs i != j with |x_i - x_j| < tau (strict).
std::uint64_t count_close_pairs(std::span<const Rat> points, const Rat& tau);

struct CrowdingConfig {
  Rat length;   // interval length B, points live in [0, B)
  Rat tau;      // 0 < tau <= B/2, B/tau integral
  BigInt sigma; // integer >= 2; requires exactly (B/tau + 1) * sigma points
};

struct CrowdingResult {
  std::uint64_t close_pairs = 0;  // measured
  Rat bound;                      // proved lower bound
  bool holds = false;
};

// L = (B/tau + 1) * sigma points in [0, B) force at least sigma^2 B / (2 tau)
// ordered close pairs.
CrowdingResult check_interval_crowding(const CrowdingConfig& config, std::span<const Rat> points);

// q intervals of common length with (B/tau + 1) * q * psi points in total
// (psi >= 3) force at least B q (psi - 2)^2 / (2 tau) close pairs counted per
// interval.
CrowdingResult check_split_crowding(const Rat& length, const Rat& tau,
                                    std::span<const std::vector<Rat>> interval_points);

struct FrequentGapResult {
  BigInt value;                  // most frequent gap among those <= 4/rho^2
  std::uint64_t multiplicity = 0;
  Rat required;                  // rho^2 A / 4
  bool holds = false;
};

struct FrequentGapOptions {
  // "total large enough" floor; 16/rho^2 is the smallest regime where the
  // guaranteed multiplicity reaches 4
  std::optional<BigInt> min_total;
};

// ceil(rho*A)-1 positive integer gaps summing to at most A contain a value
// <= 4/rho^2 repeated at least rho^2 A / 4 times.
FrequentGapResult most_frequent_small_gap(std::span<const BigInt> gaps, const Rat& rho,
                                          const BigInt& total, const FrequentGapOptions& = {});

}  // namespace pc
