#include "pc/energy.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>

#include "pc/errors.hpp"

namespace pc {

namespace {

// Run-length walk over the multiset { v[i] (op) v[j] } for i > j (diffs) or
// i <= j (sums), in nondecreasing order, without materializing the N^2
// entries: a min-heap of per-row cursors. RowValue must be cheaply copyable
// or the BigInt fallback is used.
template <typename T, typename Emit>
void walk_sorted_diffs(const std::vector<T>& v, Emit&& emit) {
  // rows: fixed i, j = i-1 down to 0 gives ascending v[i] - v[j]
  struct Cur {
    T val;
    std::uint32_t i, j;
  };
  auto cmp = [](const Cur& a, const Cur& b) { return a.val > b.val; };
  std::priority_queue<Cur, std::vector<Cur>, decltype(cmp)> heap(cmp);
  const std::uint32_t n = static_cast<std::uint32_t>(v.size());
  for (std::uint32_t i = 1; i < n; ++i) heap.push(Cur{v[i] - v[i - 1], i, i - 1});
  bool have = false;
  T run_val{};
  std::uint64_t run_len = 0;
  while (!heap.empty()) {
    Cur c = heap.top();
    heap.pop();
    if (have && c.val == run_val) {
      ++run_len;
    } else {
      if (have) emit(run_val, run_len);
      run_val = c.val;
      run_len = 1;
      have = true;
    }
    if (c.j > 0) heap.push(Cur{v[c.i] - v[c.j - 1], c.i, c.j - 1});
  }
  if (have) emit(run_val, run_len);
}

template <typename T, typename Emit>
void walk_sorted_sums(const std::vector<T>& v, Emit&& emit) {
  // rows: fixed i, j = i up to n-1 gives ascending v[i] + v[j]
  struct Cur {
    T val;
    std::uint32_t i, j;
  };
  auto cmp = [](const Cur& a, const Cur& b) { return a.val > b.val; };
  std::priority_queue<Cur, std::vector<Cur>, decltype(cmp)> heap(cmp);
  const std::uint32_t n = static_cast<std::uint32_t>(v.size());
  for (std::uint32_t i = 0; i < n; ++i) heap.push(Cur{v[i] + v[i], i, i});
  bool have = false;
  T run_val{};
  std::uint64_t run_unordered = 0, run_diag = 0;
  while (!heap.empty()) {
    Cur c = heap.top();
    heap.pop();
    if (!(have && c.val == run_val)) {
      if (have) emit(run_unordered, run_diag);
      run_val = c.val;
      run_unordered = 0;
      run_diag = 0;
      have = true;
    }
    ++run_unordered;
    if (c.i == c.j) ++run_diag;
    if (c.j + 1 < n) heap.push(Cur{v[c.i] + v[c.j + 1], c.i, c.j + 1});
  }
  if (have) emit(run_unordered, run_diag);
}

struct EnergyRoutes {
  BigInt via_sums;        // sum_s r(s)^2 over ordered representations
  BigInt via_diffs;       // N^2 + 2 * sum_{v>0} A(v)^2
  std::map<BigInt, std::uint64_t> profile;
};

template <typename T>
EnergyRoutes compute_routes(const std::vector<T>& sorted_vals, bool want_profile, bool want_sums) {
  EnergyRoutes out;
  const std::uint64_t n = sorted_vals.size();
  BigInt diff_sq_sum = 0;
  walk_sorted_diffs(sorted_vals, [&](const T& val, std::uint64_t len) {
    diff_sq_sum += BigInt(len) * BigInt(len);
    if (want_profile) out.profile.emplace(BigInt(val), len);
  });
  out.via_diffs = BigInt(n) * BigInt(n) + 2 * diff_sq_sum;
  if (want_sums) {
    BigInt sum_sq = 0;
    walk_sorted_sums(sorted_vals, [&](std::uint64_t unordered, std::uint64_t diag) {
      // r(s) over ordered pairs (a,b), a+b = s, a = b allowed
      BigInt r = 2 * BigInt(unordered) - BigInt(diag);
      sum_sq += r * r;
    });
    out.via_sums = sum_sq;
  }
  return out;
}

EnergyRoutes routes_for(const SequencePrefix& prefix, bool want_profile, bool want_sums) {
  std::vector<BigInt> sorted = prefix.values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i - 1] == sorted[i])
      fail(Errc::duplicate_value, "sequence values must be distinct");
  // int64 fast path when both sums and diffs stay in range
  const BigInt lim = BigInt(std::numeric_limits<std::int64_t>::max()) / 4;
  if (sorted.back() < lim) {
    std::vector<std::int64_t> small(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      small[i] = sorted[i].convert_to<std::int64_t>();
    auto r = compute_routes(small, want_profile, want_sums);
    return r;
  }
  return compute_routes(sorted, want_profile, want_sums);
}

void check_cap(const SequencePrefix& prefix, const EnergyOptions& opts) {
  if (prefix.size() < 2) fail(Errc::bad_spec, "energy needs N >= 2");
  if (prefix.size() > opts.max_n)
    fail(Errc::cap_exceeded, "N = " + std::to_string(prefix.size()) +
                                 " exceeds the energy cap " + std::to_string(opts.max_n) +
                                 "; raise EnergyOptions::max_n explicitly for large runs");
  if (prefix.size() > std::numeric_limits<std::uint32_t>::max())
    fail(Errc::cap_exceeded, "N too large for the pair walkers");
}

double ratio_of(const BigInt& energy, std::size_t n) {
  return to_double(Rat(energy, BigInt(n) * BigInt(n) * BigInt(n)));
}

}  // namespace

EnergyProfile difference_profile(const SequencePrefix& prefix, const EnergyOptions& opts) {
  check_cap(prefix, opts);
  auto routes = routes_for(prefix, /*want_profile=*/true, /*want_sums=*/false);
  EnergyProfile out;
  out.n = prefix.size();
  out.diff_counts = std::move(routes.profile);
  out.profile_materialized = true;
  out.energy = routes.via_diffs;
  out.ratio = ratio_of(out.energy, out.n);
  return out;
}

EnergyProfile additive_energy(const SequencePrefix& prefix, const EnergyOptions& opts) {
  check_cap(prefix, opts);
  auto routes = routes_for(prefix, opts.materialize_profile, /*want_sums=*/true);
  if (routes.via_sums != routes.via_diffs)
    fail(Errc::internal_mismatch,
         "energy routes disagree: sums " + routes.via_sums.str() + " vs diffs " +
             routes.via_diffs.str());
  EnergyProfile out;
  out.n = prefix.size();
  out.diff_counts = std::move(routes.profile);
  out.profile_materialized = opts.materialize_profile;
  out.energy = routes.via_sums;
  out.ratio = ratio_of(out.energy, out.n);
  return out;
}

std::vector<std::pair<std::size_t, double>> energy_ratio_curve(const GeneratorSpec& spec,
                                                               std::span<const std::size_t> n_list,
                                                               std::uint64_t seed,
                                                               const EnergyOptions& opts) {
  if (n_list.empty()) fail(Errc::bad_spec, "empty N list");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) fail(Errc::bad_spec, "N list must be increasing");
  SequencePrefix full = generate(spec, n_list.back(), seed);
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t n : n_list) {
    SequencePrefix sub;
    sub.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(n));
    sub.sorted_increasing = full.sorted_increasing;
    sub.label = full.label;
    out.emplace_back(n, additive_energy(sub, opts).ratio);
  }
  return out;
}

}  // namespace pc
