#include "pc/gaps.hpp"

#include <algorithm>
#include <numeric>

#include "pc/errors.hpp"
#include "pc/paircorr.hpp"

namespace pc {

namespace {

constexpr std::uint64_t kTickSlack = 4;  // grid rounding tolerance

struct OrbitPoint {
  std::uint64_t ticks;
  std::uint64_t orbit;
  double err;
};

// Certified three-way comparison of a measured dyadic quantity (value/2^B
// with |true - value/2^B| <= err) against an exact rational bound.
enum class Cmp { below, above, unsure };

Cmp certified_compare(const Rat& measured, const Rat& err, const Rat& bound) {
  if (measured + err < bound) return Cmp::below;
  if (measured - err > bound) return Cmp::above;
  return Cmp::unsure;
}

[[noreturn]] void violation(const std::string& what, const ScaleLocation& loc) {
  fail(Errc::invariant_violation,
       what + " (M=" + loc.m.str() + ", q=" + loc.q.str() + ", a=" + loc.a.str() +
           ", b=" + loc.b.str() + ", l=" + std::to_string(loc.l) + ")");
}

BundleDecomposition try_decompose(const FixedAlpha& alpha, const ContinuedFraction& cf,
                                  const BigInt& m, bool* needs_more_precision) {
  *needs_more_precision = false;
  BundleDecomposition out;
  out.m = m;
  out.loc = locate_scale(cf, m);
  const std::size_t count = to_size(m);
  const std::size_t q = to_size(out.loc.q);
  const unsigned B = static_cast<unsigned>(alpha.precision_bits());
  const BigInt scale = pow2(B);

  if (Rat(m) * alpha.error_bound() >= Rat(1, pow2(64))) {
    *needs_more_precision = true;
    return out;
  }
  std::vector<OrbitPoint> pts;
  pts.reserve(count);
  {
    // incremental orbit walk: acc holds j * scaled(alpha) mod 2^B exactly
    const BigInt& step = alpha.scaled_value();
    const BigInt limit = pow2(B);
    const BigInt half = B > 64 ? BigInt(1) << (B - 65) : BigInt(0);
    const BigInt mask64 = pow2(64) - 1;
    const double err_alpha = to_double(alpha.error_bound()) * (1.0 + 1e-9);
    BigInt acc = 0;
    for (std::size_t j = 1; j <= count; ++j) {
      acc += step;
      if (acc >= limit) acc -= limit;
      std::uint64_t ticks =
          B == 64 ? to_u64(acc) : to_u64(((acc + half) >> (B - 64)) & mask64);
      double err = static_cast<double>(j) * err_alpha + 0x1.0p-64;
      pts.push_back(OrbitPoint{ticks, static_cast<std::uint64_t>(j), err});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const OrbitPoint& x, const OrbitPoint& y) {
    return x.ticks != y.ticks ? x.ticks < y.ticks : x.orbit < y.orbit;
  });

  // bundle index floor(x * q); recheck at full precision near a boundary
  const std::uint64_t q64 = static_cast<std::uint64_t>(q);
  std::vector<std::size_t> bundle_of(count);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned __int128 prod = static_cast<unsigned __int128>(pts[i].ticks) * q64;
    std::uint64_t rem = static_cast<std::uint64_t>(prod);
    std::size_t p = static_cast<std::size_t>(prod >> 64);
    const std::uint64_t margin = q64 * (kTickSlack + 4);
    if (rem < margin || std::uint64_t(0) - rem < margin) {
      BigInt full = alpha.scaled_frac(BigInt(pts[i].orbit));
      BigInt prod_full = full * out.loc.q;
      p = to_size(prod_full >> B);
      BigInt rem_full = prod_full - (BigInt(p) << B);
      // certainty: the true point must not sit on the other side of the wall
      BigInt err_scaled = ceil_rat(Rat(pts[i].orbit) * alpha.error_bound() * Rat(scale) * Rat(out.loc.q));
      if (!rem_full.is_zero() && (rem_full <= err_scaled || scale - rem_full <= err_scaled)) {
        *needs_more_precision = true;
        return out;
      }
    }
    bundle_of[i] = p;
  }

  out.points.reserve(count);
  out.orbit_index.reserve(count);
  for (const OrbitPoint& p : pts) {
    out.points.push_back(CirclePoint{p.ticks, p.err});
    out.orbit_index.push_back(p.orbit);
  }
  out.bundle_offsets.assign(q + 1, 0);
  for (std::size_t i = 0; i < count; ++i) {
    if (bundle_of[i] >= q) violation("point mapped outside [0,1) grid", out.loc);
    out.bundle_offsets[bundle_of[i] + 1]++;
  }
  std::partial_sum(out.bundle_offsets.begin(), out.bundle_offsets.end(), out.bundle_offsets.begin());
  // points are globally sorted and bundles are ordered intervals, so the
  // flattened layout is already consistent; verify monotonicity of bundles
  for (std::size_t i = 1; i < count; ++i)
    if (bundle_of[i] < bundle_of[i - 1]) violation("bundle indices out of order", out.loc);

  // sizes must be b or b+1
  const BigInt& b = out.loc.b;
  for (std::size_t p = 0; p < q; ++p) {
    BigInt size(out.bundle_size(p));
    if (size != b && size != b + 1)
      violation("bundle " + std::to_string(p) + " has " + size.str() + " points, want " +
                    b.str() + " or " + BigInt(b + 1).str(),
                out.loc);
  }

  // common inner gap delta = |q alpha| from the exact projection
  BigInt dv = alpha.scaled_frac(out.loc.q);
  BigInt delta_scaled = std::min(dv, BigInt(scale - dv));
  out.delta = Rat(delta_scaled, scale);
  Rat delta_err = Rat(out.loc.q) * alpha.error_bound();

  // measured inner gaps must all match delta on the grid
  const std::uint64_t delta_ticks = B >= 64 ? to_u64(delta_scaled >> (B - 64)) : 0;
  for (std::size_t p = 0; p < q; ++p) {
    auto bu = out.bundle(p);
    for (std::size_t i = 1; i < bu.size(); ++i) {
      std::uint64_t g = bu[i].ticks - bu[i - 1].ticks;
      if (g + kTickSlack < delta_ticks || g > delta_ticks + kTickSlack)
        violation("inner gap deviates from the common value", out.loc);
    }
  }

  // delta strictly inside (1/(q(a+2)), 1/(q a))
  const Rat lower = Rat(1, out.loc.q * (out.loc.a + 2));
  const Rat upper = Rat(1, out.loc.q * out.loc.a);
  if (certified_compare(out.delta, delta_err, lower) != Cmp::above) {
    if (certified_compare(out.delta, delta_err, lower) == Cmp::unsure) {
      *needs_more_precision = true;
      return out;
    }
    violation("inner gap <= 1/(q(a+2))", out.loc);
  }
  if (certified_compare(out.delta, delta_err, upper) != Cmp::below) {
    if (certified_compare(out.delta, delta_err, upper) == Cmp::unsure) {
      *needs_more_precision = true;
      return out;
    }
    violation("inner gap >= 1/(q a)", out.loc);
  }

  // bundle span: w inner gaps stay inside (w/(3qa), w/(qa))
  const BigInt qa = out.loc.q * out.loc.a;
  for (std::size_t p = 0; p < q; ++p) {
    auto bu = out.bundle(p);
    if (bu.size() < 2) continue;
    const BigInt w(bu.size() - 1);
    std::uint64_t span = bu.back().ticks - bu.front().ticks;
    Rat span_r = Rat(BigInt(span), pow2(64));
    Rat tol = Rat(BigInt(2 * kTickSlack), pow2(64));
    if (span_r + tol <= Rat(w, 3 * qa) || span_r - tol >= Rat(w, qa))
      violation("bundle span outside (w/(3qa), w/(qa))", out.loc);
  }

  // offset of the bundle's edge point from the interval boundary is at most
  // delta (equality occurs at pure denominator scales, where the edge point
  // is {q alpha} itself); the even-l case anchors to the left endpoint, odd l
  // mirrors to the right
  out.notes.push_back(out.loc.l_even ? "offset check anchored left (l even)"
                                     : "offset check anchored right (l odd, mirrored)");
  bool offset_touches = false;
  for (std::size_t p = 0; p < q; ++p) {
    std::size_t pick = out.loc.l_even ? out.bundle_offsets[p] : out.bundle_offsets[p + 1] - 1;
    // tick-level screen first; the exact rational path only near a tie
    std::uint64_t x_ticks = out.points[pick].ticks;
    unsigned __int128 boundary =
        (static_cast<unsigned __int128>(out.loc.l_even ? p : p + 1) << 64) / q64;
    std::int64_t off_ticks = out.loc.l_even
                                 ? static_cast<std::int64_t>(x_ticks - static_cast<std::uint64_t>(boundary))
                                 : static_cast<std::int64_t>(static_cast<std::uint64_t>(boundary) - x_ticks);
    if (off_ticks >= 0 && static_cast<std::uint64_t>(off_ticks) + 16 < delta_ticks) continue;
    BigInt full = alpha.scaled_frac(BigInt(out.orbit_index[pick]));
    Rat x(full, scale);
    Rat off = out.loc.l_even ? x - Rat(BigInt(p), out.loc.q)
                             : Rat(BigInt(p) + 1, out.loc.q) - x;
    Rat x_err = Rat(out.orbit_index[pick]) * alpha.error_bound();
    Cmp c = certified_compare(off, x_err + delta_err, out.delta);
    if (c == Cmp::above) violation("bundle offset from its boundary exceeds the inner gap", out.loc);
    if (c == Cmp::unsure) offset_touches = true;
    if (off < 0) violation("bundle edge point left of its interval", out.loc);
  }
  if (offset_touches) out.notes.push_back("an edge offset equals the inner gap");

  // consecutive column points are at least 1/(2q) apart (complete columns)
  const BigInt bsz = b;
  std::size_t complete_cols = to_size(bsz);
  for (std::size_t col = 1; col <= complete_cols; ++col) {
    std::uint64_t prev = 0;
    bool havep = false;
    for (std::size_t p = 0; p < q; ++p) {
      std::uint64_t v = out.points[out.bundle_offsets[p] + (col - 1)].ticks;
      if (havep) {
        std::uint64_t d = v - prev;
        // 1/(2q) in ticks, rounded down
        std::uint64_t floor_bound = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(1) << 63) / q64);
        if (d + kTickSlack < floor_bound)
          violation("column neighbors closer than 1/(2q)", out.loc);
      }
      prev = v;
      havep = true;
    }
  }

  return out;
}

}  // namespace

bool BundleDecomposition::column_complete(std::size_t column) const {
  if (column == 0) return false;
  for (std::size_t p = 0; p < bundle_count(); ++p)
    if (bundle_size(p) < column) return false;
  return true;
}

std::vector<std::size_t> BundleDecomposition::column_point_indices(std::size_t column) const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < bundle_count(); ++p)
    if (bundle_size(p) >= column) out.push_back(bundle_offsets[p] + column - 1);
  return out;
}

BundleDecomposition decompose(const FixedAlpha& alpha, const ContinuedFraction& cf, const BigInt& m) {
  if (m < 1) fail(Errc::bad_spec, "M must be >= 1");
  if (m > BigInt(1) << 26)
    fail(Errc::cap_exceeded, "M = " + m.str() + " too large for a materialized decomposition");

  int needed = recommended_precision_bits(m, m);
  FixedAlpha work = alpha.precision_bits() >= needed ? alpha : resolve_alpha(alpha.spec(), needed);
  for (int attempt = 0; attempt < 4; ++attempt) {
    bool more = false;
    BundleDecomposition d = try_decompose(work, cf, m, &more);
    if (!more) return d;
    work = resolve_alpha(alpha.spec(), work.precision_bits() * 2);
  }
  fail(Errc::precision_exhausted, "decomposition needs more precision than escalation provided");
}

std::vector<std::uint64_t> neighbor_gap_values(std::span<const CirclePoint> points,
                                               std::uint64_t tol_ticks) {
  if (points.size() < 2) fail(Errc::bad_spec, "need at least two points");
  std::vector<std::uint64_t> ticks = sorted_ticks_of(points);
  std::vector<std::uint64_t> gaps;
  gaps.reserve(ticks.size());
  for (std::size_t i = 1; i < ticks.size(); ++i) gaps.push_back(ticks[i] - ticks[i - 1]);
  gaps.push_back(ticks.front() - ticks.back());  // wrap gap
  std::sort(gaps.begin(), gaps.end());
  std::vector<std::uint64_t> distinct;
  for (std::uint64_t g : gaps)
    if (distinct.empty() || g - distinct.back() > tol_ticks) distinct.push_back(g);
  return distinct;
}

std::vector<Rat> column_step_distances(const BundleDecomposition& decomp, std::size_t column,
                                       std::size_t step) {
  const std::size_t q = decomp.bundle_count();
  if (step < 1 || step >= q) fail(Errc::bad_spec, "step must satisfy 1 <= step < q");
  if (!decomp.column_complete(column))
    fail(Errc::incomplete_column,
         "column " + std::to_string(column) + " is not present in every bundle");
  auto idx = decomp.column_point_indices(column);

  // expected orbit-index gaps: t = (step * q_prev) mod q, or q - t
  BigInt t = (BigInt(step) * decomp.loc.q_prev) % decomp.loc.q;
  BigInt t_alt = decomp.loc.q - t;

  std::vector<std::uint64_t> diffs;
  for (std::size_t j = 0; j + step < idx.size(); ++j) {
    std::uint64_t lo = decomp.points[idx[j]].ticks;
    std::uint64_t hi = decomp.points[idx[j + step]].ticks;
    diffs.push_back(hi - lo);
    BigInt o1(decomp.orbit_index[idx[j]]);
    BigInt o2(decomp.orbit_index[idx[j + step]]);
    BigInt gap = abs(o2 - o1);
    if (gap != t && gap != t_alt)
      fail(Errc::invariant_violation,
           "column step orbit gap " + gap.str() + " differs from " + t.str() + " / " + t_alt.str());
  }
  std::sort(diffs.begin(), diffs.end());
  std::vector<std::uint64_t> distinct;
  for (std::uint64_t d : diffs)
    if (distinct.empty() || d - distinct.back() > kTickSlack) distinct.push_back(d);
  if (distinct.size() > 2)
    fail(Errc::invariant_violation,
         "column step distances attain " + std::to_string(distinct.size()) + " values, expected <= 2");
  std::vector<Rat> out;
  for (std::uint64_t d : distinct) out.emplace_back(Rat(BigInt(d), pow2(64)));
  return out;
}

}  // namespace pc
