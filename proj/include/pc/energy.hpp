#pragma once

// Difference profile A_N(v) and additive energy E(A_N) = #{(a,b,c,d) in A^4 :
// a+b = c+d}, with the identity E = N^2 + sum_{v != 0} A_N(v)^2 linking them.
// additive_energy computes E twice, by sum-representation counting and via
// the difference identity, and insists the two agree exactly.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pc/bigint.hpp"
#include "pc/sequences.hpp"

namespace pc {

struct EnergyProfile {
  std::size_t n = 0;
  // A_N(v) for v > 0; A_N(-v) = A_N(v). Only filled when materialization was
  // requested (the support can be quadratic in N for Sidon-like sequences).
  std::map<BigInt, std::uint64_t> diff_counts;
  bool profile_materialized = false;
  BigInt energy;       // E(A_N), in [N^2, N^3]
  double ratio = 0.0;  // E / N^3
};

struct EnergyOptions {
  // O(N^2) exact computation; energy is a diagnostic, not the hot loop.
  std::size_t max_n = 30000;
  bool materialize_profile = false;
};

// diff_counts (always materialized here) plus the identity-derived energy.
EnergyProfile difference_profile(const SequencePrefix& prefix, const EnergyOptions& opts = {});

// Full profile with the dual-route exactness check. internal_mismatch would
// signal an implementation bug and must be impossible.
EnergyProfile additive_energy(const SequencePrefix& prefix, const EnergyOptions& opts = {});

// ratio = E/N^3 per prefix length; bounded-below ratios indicate the
// Omega(N^3) energy regime, decay the opposite.
std::vector<std::pair<std::size_t, double>> energy_ratio_curve(const GeneratorSpec& spec,
                                                               std::span<const std::size_t> n_list,
                                                               std::uint64_t seed,
                                                               const EnergyOptions& opts = {});

}  // namespace pc
