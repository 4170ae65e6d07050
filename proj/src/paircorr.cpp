#include "pc/paircorr.hpp"

#include <algorithm>
#include <cmath>

#include "pc/errors.hpp"

namespace pc {

namespace {

constexpr std::uint64_t kHalfCircle = std::uint64_t(1) << 63;

// Point error bounds must be negligible against the threshold: below
// (s/N) * 1e-6, else the tick-grid comparison could misclassify pairs.
void check_point_errors(std::span<const CirclePoint> points, const Rat& s) {
  double max_err = 0.0;
  for (const auto& p : points) max_err = std::max(max_err, p.err);
  double tol = to_double(s) / static_cast<double>(points.size()) * 1e-6;
  if (max_err >= tol)
    fail(Errc::precision_exhausted,
         "point error bound " + std::to_string(max_err) + " too large for threshold s/N; " +
             "re-resolve alpha at higher precision");
}

// unordered pairs i<j with x[j] - x[i] == d exactly
std::uint64_t count_pairs_at_forward_diff(std::span<const std::uint64_t> x, std::uint64_t d) {
  std::uint64_t cnt = 0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    while (lo < j && x[j] - x[lo] > d) ++lo;
    while (hi < j && x[j] - x[hi] >= d) ++hi;
    // indices in [lo, hi) have x[j] - x[i] == d... only if diff exactly d
    if (lo < hi && x[j] - x[lo] == d) cnt += hi - lo;
  }
  return cnt;
}

}  // namespace

std::uint64_t threshold_ticks(const Rat& s, std::size_t n, bool* capped) {
  if (s < 0) fail(Errc::bad_spec, "threshold s must be >= 0");
  if (n == 0) fail(Errc::bad_spec, "no points");
  // floor(s * 2^64 / n); dist_ticks <= this iff dist <= s/N
  BigInt t = floor_div(numer(s) << 64, denom(s) * BigInt(n));
  if (t > BigInt(kHalfCircle)) {
    if (capped) *capped = true;
    return kHalfCircle;
  }
  if (capped) *capped = false;
  return to_u64(t);
}

PairCorrStat r2_naive(std::span<const CirclePoint> points, const Rat& s) {
  if (points.size() < 2) fail(Errc::bad_spec, "pair correlation needs N >= 2");
  check_point_errors(points, s);
  PairCorrStat st;
  st.n = points.size();
  st.s = s;
  std::uint64_t t = threshold_ticks(s, st.n, &st.threshold_capped);
  std::uint64_t cnt = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (circle_distance_ticks(points[i].ticks, points[j].ticks) <= t) ++cnt;
  st.ordered_pairs = 2 * cnt;
  return st;
}

std::vector<std::uint64_t> sorted_ticks_of(std::span<const CirclePoint> points) {
  std::vector<std::uint64_t> ticks;
  ticks.reserve(points.size());
  for (const auto& p : points) ticks.push_back(p.ticks);
  std::sort(ticks.begin(), ticks.end());
  return ticks;
}

std::uint64_t count_pairs_within(std::span<const std::uint64_t> x, std::uint64_t max_dist) {
  const std::size_t n = x.size();
  const std::uint64_t t = std::min(max_dist, kHalfCircle);
  std::uint64_t cnt = 0;
  // forward pairs: x[j] - x[i] <= t
  std::size_t lo = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (x[j] - x[lo] > t) ++lo;
    cnt += j - lo;
  }
  // wrap pairs: x[j] - x[i] >= 2^64 - t  (as 128-bit, no overflow)
  const unsigned __int128 wrap = (static_cast<unsigned __int128>(1) << 64) - t;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    unsigned __int128 need = static_cast<unsigned __int128>(x[i]) + wrap;
    while (j < n && static_cast<unsigned __int128>(x[j]) < need) ++j;
    std::size_t k = std::max(j, i + 1);
    cnt += n - k;
  }
  // at t = half circle a forward diff of exactly 2^63 also satisfies the
  // wrap condition; remove the double count
  if (t == kHalfCircle) cnt -= count_pairs_at_forward_diff(x, kHalfCircle);
  return cnt;
}

PairCorrStat r2_fast(std::span<const CirclePoint> points, const Rat& s) {
  if (points.size() < 2) fail(Errc::bad_spec, "pair correlation needs N >= 2");
  check_point_errors(points, s);
  PairCorrStat st;
  st.n = points.size();
  st.s = s;
  std::uint64_t t = threshold_ticks(s, st.n, &st.threshold_capped);
  auto ticks = sorted_ticks_of(points);
  st.ordered_pairs = 2 * count_pairs_within(ticks, t);
  return st;
}

WindowStat r2_window(std::span<const CirclePoint> points, const Rat& s_lo, const Rat& s_hi) {
  if (points.size() < 2) fail(Errc::bad_spec, "pair correlation needs N >= 2");
  if (!(s_lo < s_hi)) fail(Errc::bad_spec, "window needs s_lo < s_hi");
  if (s_lo < 0) fail(Errc::bad_spec, "window needs s_lo >= 0");
  check_point_errors(points, s_hi);
  WindowStat st;
  st.n = points.size();
  st.s_lo = s_lo;
  st.s_hi = s_hi;
  std::uint64_t t_hi = threshold_ticks(s_hi, st.n, &st.threshold_capped);
  std::uint64_t t_lo = threshold_ticks(s_lo, st.n);
  auto ticks = sorted_ticks_of(points);
  std::uint64_t hi = count_pairs_within(ticks, t_hi);
  std::uint64_t lo = count_pairs_within(ticks, t_lo);
  st.ordered_pairs = 2 * (hi - lo);
  return st;
}

std::vector<PairCorrStat> r2_curve(std::span<const CirclePoint> points, std::span<const Rat> s_list) {
  if (points.size() < 2) fail(Errc::bad_spec, "pair correlation needs N >= 2");
  std::vector<PairCorrStat> out;
  out.reserve(s_list.size());
  if (s_list.empty()) return out;
  Rat s_max = *std::max_element(s_list.begin(), s_list.end());
  check_point_errors(points, s_max);
  auto ticks = sorted_ticks_of(points);
  for (const Rat& s : s_list) {
    PairCorrStat st;
    st.n = points.size();
    st.s = s;
    std::uint64_t t = threshold_ticks(s, st.n, &st.threshold_capped);
    st.ordered_pairs = 2 * count_pairs_within(ticks, t);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace pc
