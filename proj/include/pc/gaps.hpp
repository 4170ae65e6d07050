#pragma once

// Bundle decomposition of the Kronecker orbit ({j alpha})_{j<=M}: with
// q = q_l <= M < q_{l+1} the orbit splits into q bundles, one per interval
// [p/q, (p+1)/q), each holding b or b+1 points spaced by a common inner gap
// delta. Columns collect the i-th element of every bundle. All structural
// inequalities are verified at construction; a violation raises rather than
// returns, since it signals a mismatch worth investigating, not a value to
// swallow.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pc/alpha.hpp"
#include "pc/bigint.hpp"
#include "pc/contfrac.hpp"

namespace pc {

struct BundleDecomposition {
  BigInt m;           // number of orbit points
  ScaleLocation loc;  // q, q_prev, a, b, parity of l
  Rat delta;          // common inner gap, exact at working precision

  // all M points ascending; bundle p occupies [bundle_offsets[p], bundle_offsets[p+1])
  std::vector<CirclePoint> points;
  std::vector<std::uint64_t> orbit_index;  // orbit_index[i] = j with points[i] ~ {j alpha}
  std::vector<std::size_t> bundle_offsets;

  std::vector<std::string> notes;

  std::size_t bundle_count() const { return bundle_offsets.size() - 1; }
  std::size_t bundle_size(std::size_t p) const { return bundle_offsets[p + 1] - bundle_offsets[p]; }
  std::span<const CirclePoint> bundle(std::size_t p) const {
    return std::span<const CirclePoint>(points).subspan(bundle_offsets[p], bundle_size(p));
  }
  // 1-based column index; complete means every bundle contributes a point.
  bool column_complete(std::size_t column) const;
  // indices into `points` of the column's entries, ascending.
  std::vector<std::size_t> column_point_indices(std::size_t column) const;
};

// Decomposes ({j alpha})_{j<=M}. Precision escalates automatically from the
// exact spec inside alpha when the provided projection is too coarse.
BundleDecomposition decompose(const FixedAlpha& alpha, const ContinuedFraction& cf, const BigInt& m);

// Distinct circular neighbor gaps (ticks), clustering values closer than
// tol_ticks; for a Kronecker orbit the result has at most 3 entries.
std::vector<std::uint64_t> neighbor_gap_values(std::span<const CirclePoint> points,
                                               std::uint64_t tol_ticks = 2);

// Distinct values among { v_{j+step} - v_j } over a complete column
// (v ascending); at most two occur, and each corresponds to an orbit-index
// gap of (step * q_prev) mod q or q minus that. Verified internally.
std::vector<Rat> column_step_distances(const BundleDecomposition& decomp, std::size_t column,
                                       std::size_t step);

}  // namespace pc
