#include "pc/witness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>
#include <unordered_set>

#include "pc/errors.hpp"
#include "pc/paircorr.hpp"

namespace pc {

namespace {

Rat rat_pow(const Rat& base, unsigned exp) {
  Rat out(1);
  for (unsigned i = 0; i < exp; ++i) out *= base;
  return out;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

}  // namespace

const char* witness_case_name(WitnessCase c) {
  switch (c) {
    case WitnessCase::case1: return "case1";
    case WitnessCase::case2: return "case2";
    case WitnessCase::case3: return "case3";
    case WitnessCase::case4: return "case4";
  }
  return "?";
}

namespace {

// Value of the purely periodic complete quotient [b_1; b_2, ..., b_p, ...],
// as the positive root of the period's Moebius matrix.
AlphaSpec quadratic_from_periodic_cf(const CfTailAlpha& tail) {
  std::size_t start = tail.digits.size() - tail.period;
  // period block matrix: product of [[b_i, 1], [1, 0]]
  BigInt m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  for (std::size_t i = start; i < tail.digits.size(); ++i) {
    const BigInt& b = tail.digits[i];
    BigInt n00 = b * m00 + m10;
    BigInt n01 = b * m01 + m11;
    m10 = m00;
    m11 = m01;
    m00 = n00;
    m01 = n01;
  }
  // z = (m00 z + m01) / (m10 z + m11)  =>  m10 z^2 + (m11 - m00) z - m01 = 0
  BigInt u = m00 - m11;
  BigInt v = 2 * m10;
  BigInt disc = (m11 - m00) * (m11 - m00) + 4 * m10 * m01;
  // alpha = (P1 z + P0) / (Q1 z + Q0) over the preamble convergents
  BigInt p1 = 0, q1 = 1, p0 = 1, q0 = 0;  // conv(-1) = (1,0), conv(0) = (0,1)
  for (std::size_t i = 0; i < start; ++i) {
    const BigInt& a = tail.digits[i];
    BigInt np = a * p1 + p0;
    BigInt nq = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = np;
    q1 = nq;
  }
  // substitute z = (u + sqrt(disc)) / v and rationalize
  BigInt A = p1 * u + p0 * v;
  BigInt B = p1;
  BigInt C = q1 * u + q0 * v;
  BigInt E = q1;
  BigInt P = A * C - B * E * disc;
  BigInt Bp = B * C - A * E;
  BigInt Q = C * C - E * E * disc;
  if (Bp.is_zero()) fail(Errc::bad_spec, "periodic digit stream describes a rational");
  if (Bp < 0) {
    P = -P;
    Q = -Q;
    Bp = -Bp;
  }
  return AlphaSpec::quadratic(P, Q, disc * Bp * Bp);
}

}  // namespace

AlphaSpec scale_alpha(const AlphaSpec& alpha, const BigInt& k) {
  if (k < 1) fail(Errc::bad_spec, "scale factor must be >= 1");
  if (auto* r = std::get_if<RationalAlpha>(&alpha.value()))
    return AlphaSpec::rational(k * r->num, r->den);
  if (auto* q = std::get_if<QuadraticAlpha>(&alpha.value()))
    return AlphaSpec::quadratic(k * q->p, q->q, k * k * q->d);
  const auto& tail = std::get<CfTailAlpha>(alpha.value());
  if (tail.period == 0)
    fail(Errc::digit_stream_exhausted,
         "cannot rescale a truncated digit stream exactly; give a period or a closed form");
  if (k == 1) return alpha;
  auto quad = quadratic_from_periodic_cf(tail);
  return scale_alpha(quad, k);
}

ReducedCertificate reduce_certificate(const QuasiArithCertificate& cert,
                                      const SequencePrefix& prefix, const AlphaSpec& alpha) {
  if (cert.degree != 1) fail(Errc::bad_spec, "only degree-1 certificates are reducible");
  if (!verify_certificate(prefix, cert)) fail(Errc::bad_spec, "certificate does not verify");
  ReducedCertificate out{{}, scale_alpha(alpha, cert.ap_step)};
  out.ranks.reserve(cert.member_indices.size());
  BigInt min_rank;
  bool first = true;
  for (std::size_t idx : cert.member_indices) {
    BigInt r = (prefix.values[idx] - cert.ap_offset) / cert.ap_step;
    if (first || r < min_rank) min_rank = r;
    first = false;
    out.ranks.push_back(std::move(r));
  }
  // shift to 1-based; a common shift only rotates the circle and leaves all
  // pair distances unchanged
  for (BigInt& r : out.ranks) r = r - min_rank + 1;
  return out;
}

WitnessContext build_context(const SequencePrefix& prefix, const AlphaSpec& alpha,
                             const QuasiArithCertificate& cert) {
  WitnessContext wc;
  wc.reduced = reduce_certificate(cert, prefix, alpha);

  const BigInt m = cert.ap_length;
  int bits = recommended_precision_bits(m, m);
  FixedAlpha fixed = resolve_alpha(wc.reduced.alpha_prime, bits);
  ContinuedFraction cf = ContinuedFraction::expand(wc.reduced.alpha_prime, 64);
  wc.decomp = decompose(fixed, cf, m);

  CaseContext& ctx = wc.ctx;
  ctx.n = cert.n;
  ctx.w = BigInt(cert.member_indices.size());
  ctx.m = m;
  ctx.gamma = cert.gamma();
  ctx.cap_gamma = cert.cap_gamma();
  ctx.c = cert.c;
  ctx.k_factor = cert.k_factor;
  ctx.loc = wc.decomp.loc;
  ctx.delta = wc.decomp.delta;

  // subset membership by orbit index
  std::unordered_set<std::uint64_t> rank_set;
  rank_set.reserve(wc.reduced.ranks.size() * 2);
  for (const BigInt& r : wc.reduced.ranks) {
    if (r < 1 || r > m) fail(Errc::invariant_violation, "reduced rank outside 1..M");
    rank_set.insert(to_u64(r));
  }
  wc.in_subset.assign(wc.decomp.points.size(), 0);
  wc.occupancy.assign(wc.decomp.bundle_count(), 0);
  BigInt seen = 0;
  for (std::size_t p = 0; p < wc.decomp.bundle_count(); ++p) {
    for (std::size_t i = wc.decomp.bundle_offsets[p]; i < wc.decomp.bundle_offsets[p + 1]; ++i) {
      if (rank_set.count(wc.decomp.orbit_index[i])) {
        wc.in_subset[i] = 1;
        ++wc.occupancy[p];
        ++seen;
      }
    }
  }
  if (seen != ctx.w)
    fail(Errc::internal_mismatch, "occupancy sums to " + seen.str() + ", want " + ctx.w.str());

  // scale chain; each link named on failure
  const Rat bq(ctx.loc.b * ctx.loc.q);
  const Rat n_rat(BigInt(ctx.n));
  auto demand = [&](bool ok, const char* what) {
    if (!ok) fail(Errc::invariant_violation, std::string("scale chain: ") + what);
  };
  demand(bq / ctx.k_factor <= bq / ctx.cap_gamma, "b q / K <= b q / Gamma (Gamma <= K)");
  demand(bq / ctx.cap_gamma <= n_rat, "b q / Gamma <= N (b q <= M)");
  demand(n_rat == Rat(ctx.m) / ctx.cap_gamma, "N = M / Gamma");
  demand(n_rat <= Rat((ctx.loc.b + 1) * ctx.loc.q) / ctx.cap_gamma, "N <= (b+1) q / Gamma");
  demand(Rat((ctx.loc.b + 1) * ctx.loc.q) <= 2 * bq, "(b+1) q <= 2 b q (b >= 1)");
  demand(2 * bq / ctx.cap_gamma <= 8 * bq / ctx.k_factor,
         "2 b q / Gamma <= 8 b q / K (K <= 4 Gamma; certificate not in the normalized regime)");
  return wc;
}

WitnessCase classify_case(const CaseContext& ctx) {
  const Rat one_over_n(1, BigInt(ctx.n));
  const Rat c5 = rat_pow(ctx.c, 5);
  const Rat q_rat(ctx.loc.q);
  // coarse scale: 1/N >= c^5 / (K 2^29 q)
  if (one_over_n >= c5 / (ctx.k_factor * Rat(pow2(29)) * q_rat)) return WitnessCase::case4;
  const Rat ab_ratio(ctx.loc.a, ctx.loc.b);
  const Rat ab_cut = Rat(pow2(23)) / (ctx.c * ctx.c);
  // repeated inner gap: a/b small and N large relative to q
  if (ab_ratio <= ab_cut && one_over_n < c5 / (ctx.k_factor * Rat(pow2(23)) * q_rat))
    return WitnessCase::case2;
  // long sparse bundles: bundle length well above 1/N, a much larger than b
  if (Rat(ctx.loc.b) * ctx.delta >= Rat(128) / (ctx.c * Rat(BigInt(ctx.n))) && ab_ratio >= ab_cut)
    return WitnessCase::case1;
  return WitnessCase::case3;
}

ThresholdGrid::Bracket ThresholdGrid::bracket(const Rat& x) const {
  if (x < start || x > span_end())
    fail(Errc::bracketing_failed,
         "value " + rat_string(x) + " outside the grid span [" + rat_string(start) + ", " +
             rat_string(span_end()) + "]");
  Rat offset = (x - start) / step;
  BigInt j = floor_rat(offset);
  bool tie = Rat(j) == offset;
  if (j >= j_max) {
    j = j_max - 1;  // x == span_end exactly
    tie = true;
  }
  Bracket br;
  br.j_lo = j;
  br.s_lo = at(j);
  br.s_hi = at(j + 1);
  br.tie = tie;
  return br;
}

std::vector<Rat> ThresholdGrid::materialize(std::size_t budget, bool whole_grid) const {
  BigInt count = j_max + 1;
  if (whole_grid && count > BigInt(budget))
    fail(Errc::grid_too_large,
         "grid has " + count.str() + " elements, budget " + std::to_string(budget));
  std::size_t n = count > BigInt(budget) ? budget : to_size(count);
  std::vector<Rat> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back(at(BigInt(j)));
  return out;
}

ThresholdGrid case2_threshold_grid(const Rat& c, const Rat& k_factor) {
  if (c <= 0 || c > 1 || k_factor < 1) fail(Errc::bad_spec, "want 0 < c <= 1 <= K");
  ThresholdGrid g;
  g.start = c * c / (3 * Rat(pow2(23)) * k_factor);
  g.step = c * c / (Rat(pow2(9)) * k_factor);
  g.j_max = ceil_rat(Rat(pow2(16)) * k_factor * k_factor / rat_pow(c, 3));
  return g;
}

ThresholdGrid case4_threshold_grid(const Rat& c, const Rat& k_factor) {
  if (c <= 0 || c > 1 || k_factor < 1) fail(Errc::bad_spec, "want 0 < c <= 1 <= K");
  ThresholdGrid g;
  g.start = Rat(1) / (2 * k_factor);
  g.step = rat_pow(c, 7) / (rat_pow(k_factor, 3) * Rat(pow2(34)));
  g.j_max = ceil_rat(4 * rat_pow(k_factor, 7) * Rat(pow2(66)) / rat_pow(c, 14));
  return g;
}

namespace {

struct RankedValue {
  Rat value;
  std::uint64_t count;
  std::string note;
};

// Most frequent normalized in-bundle gaps beta, reported as beta * delta.
std::vector<RankedValue> bundle_gap_candidates(const WitnessContext& wc, std::size_t max_count) {
  const BundleDecomposition& d = wc.decomp;
  const std::uint64_t delta_ticks = to_u64(floor_rat(d.delta * Rat(pow2(64))));
  if (delta_ticks == 0) return {};
  std::map<std::uint64_t, std::uint64_t> freq;
  for (std::size_t p = 0; p < d.bundle_count(); ++p) {
    std::uint64_t prev = 0;
    bool have = false;
    for (std::size_t i = d.bundle_offsets[p]; i < d.bundle_offsets[p + 1]; ++i) {
      if (!wc.in_subset[i]) continue;
      std::uint64_t t = d.points[i].ticks;
      if (have) {
        std::uint64_t diff = t - prev;
        std::uint64_t beta = (diff + delta_ticks / 2) / delta_ticks;
        if (beta >= 1) ++freq[beta];
      }
      prev = t;
      have = true;
    }
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> order(freq.begin(), freq.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<RankedValue> out;
  for (const auto& [beta, cnt] : order) {
    if (out.size() >= max_count) break;
    out.push_back(RankedValue{Rat(BigInt(beta)) * wc.decomp.delta, cnt,
                              "beta=" + std::to_string(beta) + " count=" + std::to_string(cnt)});
  }
  return out;
}

// Most frequent same-bundle-step column distances kappa.
std::vector<RankedValue> column_gap_candidates(const WitnessContext& wc, std::size_t max_count) {
  const BundleDecomposition& d = wc.decomp;
  const std::size_t q = d.bundle_count();
  const std::size_t cols = to_size(d.loc.b) + 1;
  // order columns by subset occupancy
  std::vector<std::pair<std::uint64_t, std::size_t>> by_count;
  for (std::size_t col = 1; col <= cols; ++col) {
    std::uint64_t cnt = 0;
    for (std::size_t p = 0; p < q; ++p)
      if (d.bundle_size(p) >= col && wc.in_subset[d.bundle_offsets[p] + col - 1]) ++cnt;
    if (cnt >= 2) by_count.emplace_back(cnt, col);
  }
  std::sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  std::vector<RankedValue> out;
  for (const auto& [cnt, col] : by_count) {
    if (out.size() >= max_count) break;
    std::vector<std::pair<std::uint64_t, std::size_t>> members;  // (ticks, bundle)
    for (std::size_t p = 0; p < q; ++p)
      if (d.bundle_size(p) >= col && wc.in_subset[d.bundle_offsets[p] + col - 1])
        members.emplace_back(d.points[d.bundle_offsets[p] + col - 1].ticks, p);
    // frequency of the bundle-index steps
    std::map<std::size_t, std::uint64_t> step_freq;
    for (std::size_t i = 1; i < members.size(); ++i)
      ++step_freq[members[i].second - members[i - 1].second];
    std::vector<std::pair<std::size_t, std::uint64_t>> steps(step_freq.begin(), step_freq.end());
    std::sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [step, scount] : steps) {
      if (out.size() >= max_count) break;
      // distances for that step value cluster into at most two values
      std::vector<std::uint64_t> dist;
      for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].second - members[i - 1].second == step)
          dist.push_back(members[i].first - members[i - 1].first);
      std::sort(dist.begin(), dist.end());
      std::vector<std::pair<std::uint64_t, std::uint64_t>> clusters;  // (value, count)
      for (std::uint64_t v : dist) {
        if (!clusters.empty() && v - clusters.back().first <= 8)
          clusters.back().second++;
        else
          clusters.emplace_back(v, 1);
      }
      std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      });
      for (const auto& [kappa_ticks, kcnt] : clusters) {
        if (out.size() >= max_count) break;
        out.push_back(RankedValue{Rat(BigInt(kappa_ticks), pow2(64)), kcnt,
                                  "col=" + std::to_string(col) + " bundle_step=" + std::to_string(step) +
                                      " count=" + std::to_string(kcnt)});
      }
      if (!steps.empty()) break;  // paper picks one step value per column; keep both clusters
    }
  }
  return out;
}

}  // namespace

WitnessThresholds case_predicted_thresholds(const WitnessContext& wctx, WitnessCase which) {
  WitnessThresholds th;
  th.case_id = which;
  const CaseContext& ctx = wctx.ctx;
  switch (which) {
    case WitnessCase::case1: {
      th.single_s = Rat(64) / ctx.c;
      th.floor_ref = 4 * *th.single_s;
      return th;
    }
    case WitnessCase::case3: {
      th.single_s = Rat(1);
      th.floor_ref = Rat(4);
      return th;
    }
    case WitnessCase::case2: {
      auto cands = bundle_gap_candidates(wctx, 1);
      if (cands.empty())
        fail(Errc::bracketing_failed, "no in-bundle subset gaps to derive a repeated value from");
      ThresholdGrid grid = case2_threshold_grid(ctx.c, ctx.k_factor);
      auto br = grid.bracket(cands[0].value * Rat(BigInt(ctx.n)));
      th.window = {br.s_lo, br.s_hi};
      th.grid_index = br.j_lo;
      th.floor_ref = 4 * grid.step;
      th.notes.push_back(cands[0].note);
      if (br.tie) th.notes.push_back("value fell exactly on a grid element");
      // reference count floor: c^2 b q / (16 K^2)
      th.notes.push_back("repeat count reference floor " +
                         rat_string(ctx.c * ctx.c * Rat(ctx.loc.b * ctx.loc.q) /
                                    (16 * ctx.k_factor * ctx.k_factor)));
      return th;
    }
    case WitnessCase::case4: {
      auto cands = column_gap_candidates(wctx, 2);
      if (cands.empty())
        fail(Errc::bracketing_failed, "no column subset pairs to derive a repeated value from");
      // kappa respects the column separation bound
      if (cands[0].value < Rat(1, 2 * ctx.loc.q) - Rat(16, pow2(64)))
        fail(Errc::invariant_violation, "column distance below 1/(2q)");
      ThresholdGrid grid = case4_threshold_grid(ctx.c, ctx.k_factor);
      auto br = grid.bracket(cands[0].value * Rat(BigInt(ctx.n)));
      th.window = {br.s_lo, br.s_hi};
      th.grid_index = br.j_lo;
      th.floor_ref = 4 * grid.step;
      th.notes.push_back(cands[0].note);
      if (br.tie) th.notes.push_back("value fell exactly on a grid element");
      th.notes.push_back("repeat count reference floor " +
                         rat_string(ctx.c * ctx.c * Rat(ctx.loc.q) /
                                    (8 * ctx.k_factor * ctx.k_factor)));
      return th;
    }
  }
  fail(Errc::bad_spec, "unknown case");
}

namespace {

// Re-derive the certificate at prefix length n: same (c, K, k, residue),
// window re-optimized. Mirrors the detector's fixed-k inner loop.
std::optional<QuasiArithCertificate> derive_certificate_at(const SequencePrefix& prefix,
                                                           std::size_t n,
                                                           const QuasiArithCertificate& base) {
  SequencePrefix sub;
  sub.values.assign(prefix.values.begin(), prefix.values.begin() + static_cast<std::ptrdiff_t>(n));
  sub.sorted_increasing = prefix.sorted_increasing;
  sub.label = prefix.label;

  const BigInt& k = base.ap_step;
  BigInt res = ((base.ap_offset % k) + k) % k;
  BigInt len = floor_rat(base.k_factor * Rat(BigInt(n)));
  BigInt need = ceil_rat(base.c * Rat(BigInt(n)));
  std::vector<std::size_t> members;
  std::vector<BigInt> ranks;
  for (std::size_t i = 0; i < n; ++i) {
    if ((sub.values[i] % k) == res) {
      members.push_back(i);
      ranks.push_back((sub.values[i] - res) / k);
    }
  }
  if (BigInt(members.size()) < need) return std::nullopt;
  std::size_t lo = 0, best_count = 0, best_lo = 0;
  for (std::size_t hi = 0; hi < ranks.size(); ++hi) {
    while (ranks[hi] - ranks[lo] >= len) ++lo;
    if (hi - lo + 1 > best_count) {
      best_count = hi - lo + 1;
      best_lo = lo;
    }
  }
  if (BigInt(best_count) < need) return std::nullopt;
  QuasiArithCertificate cert;
  cert.c = base.c;
  cert.k_factor = base.k_factor;
  cert.n = n;
  cert.ap_step = k;
  cert.ap_offset = res + ranks[best_lo] * k;
  cert.ap_length = len;
  for (std::size_t i = best_lo; i < ranks.size(); ++i) {
    if (ranks[i] - ranks[best_lo] >= len) break;
    cert.member_indices.push_back(members[i]);
  }
  if (!verify_certificate(sub, cert)) return std::nullopt;
  return cert;
}

struct Candidate {
  std::optional<Rat> single_s;
  std::optional<std::pair<Rat, Rat>> window;
  Rat floor_ref;
  std::string note;
};

std::vector<Candidate> candidates_for(const WitnessContext& wc, WitnessCase which,
                                      std::size_t budget) {
  std::vector<Candidate> out;
  const CaseContext& ctx = wc.ctx;
  if (which == WitnessCase::case1 || which == WitnessCase::case3) {
    WitnessThresholds th = case_predicted_thresholds(wc, which);
    out.push_back(Candidate{th.single_s, std::nullopt, th.floor_ref, ""});
    return out;
  }
  ThresholdGrid grid = which == WitnessCase::case2 ? case2_threshold_grid(ctx.c, ctx.k_factor)
                                                   : case4_threshold_grid(ctx.c, ctx.k_factor);
  auto ranked = which == WitnessCase::case2 ? bundle_gap_candidates(wc, budget)
                                            : column_gap_candidates(wc, budget);
  std::set<std::string> seen;
  for (const auto& rv : ranked) {
    if (out.size() >= budget) break;
    Rat x = rv.value * Rat(BigInt(ctx.n));
    if (x <= grid.start || x >= grid.span_end()) continue;  // out of span: skip alternate
    auto br = grid.bracket(x);
    std::string key = rat_string(br.s_lo);
    if (!seen.insert(key).second) continue;
    out.push_back(Candidate{std::nullopt, std::make_pair(br.s_lo, br.s_hi), 4 * grid.step, rv.note});
  }
  return out;
}

WitnessReport measure_candidates(const SequencePrefix& prefix, std::size_t n,
                                 const AlphaSpec& alpha, const WitnessContext& wc,
                                 WitnessCase which, const std::vector<Candidate>& cands) {
  WitnessReport rep;
  rep.n = n;
  rep.case_id = which;

  // full-prefix points under the original alpha
  std::vector<BigInt> terms(prefix.values.begin(),
                            prefix.values.begin() + static_cast<std::ptrdiff_t>(n));
  BigInt max_term = *std::max_element(terms.begin(), terms.end());
  FixedAlpha fixed = resolve_alpha(alpha, recommended_precision_bits(max_term, BigInt(n)));
  auto points = frac_parts(fixed, terms);
  auto ticks = sorted_ticks_of(points);

  // subset points in the reduced frame (a rotation; pair distances agree)
  FixedAlpha fixed_prime =
      resolve_alpha(wc.reduced.alpha_prime, recommended_precision_bits(wc.ctx.m, wc.ctx.m));
  auto sub_points = frac_parts(fixed_prime, wc.reduced.ranks);
  auto sub_ticks = sorted_ticks_of(sub_points);

  bool first = true;
  for (const auto& cand : cands) {
    double measured, ref;
    std::uint64_t full_pairs, subset_pairs;
    std::string label;
    if (cand.single_s) {
      std::uint64_t t = threshold_ticks(*cand.single_s, n);
      full_pairs = 2 * count_pairs_within(ticks, t);
      subset_pairs = 2 * count_pairs_within(sub_ticks, t);
      measured = static_cast<double>(full_pairs) / static_cast<double>(n);
      ref = 2.0 * to_double(*cand.single_s);
      label = "s=" + rat_string(*cand.single_s);
    } else {
      std::uint64_t t_lo = threshold_ticks(cand.window->first, n);
      std::uint64_t t_hi = threshold_ticks(cand.window->second, n);
      full_pairs = 2 * (count_pairs_within(ticks, t_hi) - count_pairs_within(ticks, t_lo));
      subset_pairs = 2 * (count_pairs_within(sub_ticks, t_hi) - count_pairs_within(sub_ticks, t_lo));
      measured = static_cast<double>(full_pairs) / static_cast<double>(n);
      ref = 2.0 * to_double(cand.window->second - cand.window->first);
      label = "s1=" + rat_string(cand.window->first) + " s2=" + rat_string(cand.window->second);
    }
    // monotone subset bound: the full count can only exceed the subset's
    if (subset_pairs > full_pairs)
      fail(Errc::internal_mismatch, "subset pair count exceeds the full prefix count");
    double deviation = measured - ref;
    if (first || std::abs(deviation) > std::abs(rep.deviation)) {
      rep.s_label = label;
      rep.measured = measured;
      rep.poisson_ref = ref;
      rep.deviation = deviation;
      rep.floor_ref = to_double(cand.floor_ref);
      rep.subset_pairs = subset_pairs;
      rep.full_pairs = full_pairs;
      rep.notes.clear();
      if (!cand.note.empty()) rep.notes.push_back(cand.note);
      first = false;
    }
  }
  return rep;
}

}  // namespace

WitnessSummary witness_search(const SequencePrefix& prefix, const AlphaSpec& alpha,
                              const QuasiArithCertificate& base_cert,
                              std::span<const std::size_t> n_list, const WitnessOptions& opts) {
  if (!prefix.sorted_increasing)
    fail(Errc::bad_spec, "witness search needs a strictly increasing prefix");
  if (base_cert.member_indices.empty())
    fail(Errc::bad_spec, "witness search requires a verified certificate");
  std::vector<std::size_t> ns(n_list.begin(), n_list.end());
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) fail(Errc::bad_spec, "N list must be increasing");

  WitnessSummary summary;
  std::vector<std::optional<WitnessReport>> slots(ns.size());
  std::vector<std::string> errors(ns.size());

  auto task = [&](std::size_t i) {
    std::size_t n = ns[i];
    if (n < 2 || n > prefix.size()) {
      errors[i] = "N out of range";
      return;
    }
    auto cert = derive_certificate_at(prefix, n, base_cert);
    if (!cert) {
      errors[i] = "certificate parameters not attainable at this N";
      return;
    }
    SequencePrefix sub;
    sub.values.assign(prefix.values.begin(), prefix.values.begin() + static_cast<std::ptrdiff_t>(n));
    sub.sorted_increasing = prefix.sorted_increasing;
    sub.label = prefix.label;
    WitnessContext wc = build_context(sub, alpha, *cert);
    WitnessCase which = classify_case(wc.ctx);
    auto cands = candidates_for(wc, which, opts.s_budget);
    if (cands.empty()) {
      errors[i] = "no candidate thresholds in the grid span";
      return;
    }
    slots[i] = measure_candidates(sub, n, alpha, wc, which, cands);
  };

  unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(ns.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < ns.size(); ++i) task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> exc(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= ns.size()) return;
            task(i);
          }
        } catch (...) {
          exc[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : exc)
      if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!slots[i]) {
      WitnessReport rep;
      rep.n = ns[i];
      rep.notes.push_back("skipped: " + errors[i]);
      summary.reports.push_back(std::move(rep));
      continue;
    }
    WitnessReport& rep = *slots[i];
    if (std::abs(rep.deviation) > summary.max_abs_deviation) {
      summary.max_abs_deviation = std::abs(rep.deviation);
      summary.best_n = rep.n;
    }
    summary.reports.push_back(std::move(rep));
  }
  summary.witness_found = summary.max_abs_deviation >= opts.margin;
  return summary;
}

}  // namespace pc
