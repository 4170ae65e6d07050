#pragma once

// The pair correlation statistic: the normalized count of ordered pairs
// i != j with circle distance at most s/N, which for i.i.d. uniform points
// tends to 2s. Includes an exact O(N^2) reference scan, a sorted sliding
// window fast path, window (band) counts, and batched curves.
//
// Each unordered pair is counted twice (the i != j double count), so the
// Poissonian reference value is 2s, not s. The threshold comparison is
// inclusive and evaluated on the 64-bit tick grid, making ties exact and
// deterministic.

#include <cstdint>
#include <span>
#include <vector>

#include "pc/alpha.hpp"
#include "pc/bigint.hpp"

namespace pc {

struct PairCorrStat {
  std::size_t n = 0;              // N
  Rat s;                          // threshold parameter
  std::uint64_t ordered_pairs = 0;
  bool threshold_capped = false;  // s/N exceeded 1/2 and was capped

  double value() const { return static_cast<double>(ordered_pairs) / static_cast<double>(n); }
  double poisson_ref() const { return 2.0 * to_double(s); }
};

struct WindowStat {
  std::size_t n = 0;
  Rat s_lo, s_hi;                 // counts pairs with s_lo/N < dist <= s_hi/N
  std::uint64_t ordered_pairs = 0;
  bool threshold_capped = false;

  double value() const { return static_cast<double>(ordered_pairs) / static_cast<double>(n); }
  double poisson_ref() const { return 2.0 * to_double(s_hi - s_lo); }
};

// s/N as a tick threshold, capped at the half circle. Inclusive comparison:
// a pair is within iff dist_ticks <= result.
std::uint64_t threshold_ticks(const Rat& s, std::size_t n, bool* capped = nullptr);

// O(N^2) reference scan.
PairCorrStat r2_naive(std::span<const CirclePoint> points, const Rat& s);

// Sort + circular sliding window, O(N log N + matches); pair counts are
// guaranteed identical to r2_naive.
PairCorrStat r2_fast(std::span<const CirclePoint> points, const Rat& s);

// Band count: pairs with s_lo/N < dist <= s_hi/N, no cancellation (exact
// integer counts on the tick grid).
WindowStat r2_window(std::span<const CirclePoint> points, const Rat& s_lo, const Rat& s_hi);

// One sorted pass serving every threshold; entry i equals r2_fast(points, s_list[i]).
std::vector<PairCorrStat> r2_curve(std::span<const CirclePoint> points, std::span<const Rat> s_list);

// Counting core on sorted ticks: unordered pairs with circular distance <=
// max_dist (max_dist <= 2^63). Exposed for reuse by the witness engine.
std::uint64_t count_pairs_within(std::span<const std::uint64_t> sorted_ticks, std::uint64_t max_dist);

std::vector<std::uint64_t> sorted_ticks_of(std::span<const CirclePoint> points);

}  // namespace pc
