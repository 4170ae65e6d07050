#pragma once

// The witness engine: reduce a degree-1 certificate to the k=1, h=0 frame,
// classify the (N, alpha, certificate) situation into one of four cases,
// derive the case's candidate thresholds (a fixed s, or a consecutive pair
// s1 < s2 from a universal grid), and measure the pair correlation deviation
// from the Poissonian reference 2s.
//
// The four proved lower bounds (>= 4s resp. 4(s2-s1)) hold asymptotically
// with astronomically large constants; at desk scale they are reported as
// reference values and acceptance rides on the empirical deviation margin.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pc/alpha.hpp"
#include "pc/bigint.hpp"
#include "pc/contfrac.hpp"
#include "pc/gaps.hpp"
#include "pc/sequences.hpp"
#include "pc/structure.hpp"

namespace pc {

enum class WitnessCase { case1 = 1, case2 = 2, case3 = 3, case4 = 4 };

const char* witness_case_name(WitnessCase c);

// alpha' = k * alpha mod 1, exact for rational, quadratic, and periodic
// digit-stream specs (the latter are converted to their quadratic form).
AlphaSpec scale_alpha(const AlphaSpec& alpha, const BigInt& k);

struct ReducedCertificate {
  std::vector<BigInt> ranks;  // 1-based progression ranks of the certified subset
  AlphaSpec alpha_prime;      // k * alpha mod 1
};

// Drops the offset h (pair correlation only sees differences) and rescales
// by the common difference k, so the subset becomes {rank * alpha'} with
// ranks inside {1..M}.
ReducedCertificate reduce_certificate(const QuasiArithCertificate& cert,
                                      const SequencePrefix& prefix, const AlphaSpec& alpha);

// The classifiable facts of a situation. Synthetic contexts can be built
// directly for classifier tests.
struct CaseContext {
  std::size_t n = 0;   // N
  BigInt w;            // |subset|
  BigInt m;            // M = ceil(Gamma * N)
  Rat gamma;           // |subset| / N
  Rat cap_gamma;       // M / N
  Rat c;               // density constant
  Rat k_factor;        // size constant K
  ScaleLocation loc;   // q, q_prev, a, b, parity
  Rat delta;           // inner gap of the bundle decomposition
};

// Context plus the heavy data thresholds are derived from.
struct WitnessContext {
  CaseContext ctx;
  BundleDecomposition decomp;
  std::vector<char> in_subset;            // aligned with decomp.points
  std::vector<std::uint64_t> occupancy;   // subset points per bundle, sums to W
  ReducedCertificate reduced{{}, AlphaSpec::rational(0, 1)};
};

// Builds the reduced-frame decomposition at M = cert.ap_length and checks the
// scale chain b q / K <= b q / Gamma <= N <= (b+1) q / Gamma <= 2 b q / Gamma
// <= 8 b q / K; violations name the failed inequality.
WitnessContext build_context(const SequencePrefix& prefix, const AlphaSpec& alpha,
                             const QuasiArithCertificate& cert);

// Total and deterministic. Precedence 4 -> 2 -> 1 -> 3: the coarse-scale test
// first (it is independent of delta), then the repeated-inner-gap regime,
// then long sparse bundles, else short bundles.
WitnessCase classify_case(const CaseContext& ctx);

// A lazily evaluated arithmetic grid start + j*step, j = 0..j_max. The grids
// depend only on (c, K); thresholds are bitwise reconstructible from indices.
struct ThresholdGrid {
  Rat start;
  Rat step;
  BigInt j_max;

  Rat at(const BigInt& j) const { return start + Rat(j) * step; }
  Rat span_end() const { return at(j_max); }

  struct Bracket {
    BigInt j_lo;
    Rat s_lo, s_hi;
    bool tie = false;  // x fell exactly on a grid element
  };
  // Consecutive elements with s_lo < x < s_hi; bracketing_failed outside the span.
  Bracket bracket(const Rat& x) const;

  // Materialize the first min(count, j_max+1) elements; grid_too_large if the
  // full grid was demanded but does not fit the budget.
  std::vector<Rat> materialize(std::size_t budget, bool whole_grid = false) const;
};

// Case-2 grid: start c^2/(3*2^23*K), spacing c^2/(2^9*K), j up to 2^16*K^2/c^3.
ThresholdGrid case2_threshold_grid(const Rat& c, const Rat& k_factor);
// Case-4 grid: start 1/(2K), spacing c^7/(K^3*2^34), j up to 4*K^7*2^66/c^14.
ThresholdGrid case4_threshold_grid(const Rat& c, const Rat& k_factor);

struct WitnessThresholds {
  WitnessCase case_id = WitnessCase::case4;
  std::optional<Rat> single_s;                  // cases 1 and 3
  std::optional<std::pair<Rat, Rat>> window;    // cases 2 and 4: consecutive grid pair
  std::optional<BigInt> grid_index;             // j of the bracketing pair
  Rat floor_ref;                                // proved asymptotic floor: 4s or 4(s2-s1)
  std::vector<std::string> notes;               // beta / kappa diagnostics
};

// Case 1: s = 2^6/c. Case 3: s = 1. Case 2: brackets the most frequent
// normalized in-bundle gap beta*delta*N in the case-2 grid. Case 4: brackets
// the most frequent column step kappa*N in the case-4 grid.
WitnessThresholds case_predicted_thresholds(const WitnessContext& wctx, WitnessCase which);

struct WitnessReport {
  std::size_t n = 0;
  WitnessCase case_id = WitnessCase::case4;
  std::string s_label;        // exact rational rendering of s or (s1, s2)
  double measured = 0.0;      // R_N(s) or R_N(s2) - R_N(s1)
  double poisson_ref = 0.0;   // 2s or 2(s2-s1)
  double deviation = 0.0;     // measured - poisson_ref
  double floor_ref = 0.0;
  std::uint64_t subset_pairs = 0;  // ordered close pairs within the subset
  std::uint64_t full_pairs = 0;    // ordered close pairs in the whole prefix
  std::vector<std::string> notes;
};

struct WitnessOptions {
  std::size_t s_budget = 8;  // candidate thresholds evaluated per N
  double margin = 0.2;       // |deviation| needed to call it a witness
};

struct WitnessSummary {
  double max_abs_deviation = 0.0;
  std::size_t best_n = 0;
  bool witness_found = false;
  std::vector<WitnessReport> reports;  // one per usable N, ascending
};

// For each N: derive the certificate at that prefix length (same c, K, k,
// residue), build the reduced context, classify, evaluate the predicted
// thresholds (plus alternates up to s_budget) against R_N measured on the
// full prefix, and keep the largest |deviation|.
WitnessSummary witness_search(const SequencePrefix& prefix, const AlphaSpec& alpha,
                              const QuasiArithCertificate& base_cert,
                              std::span<const std::size_t> n_list, const WitnessOptions& opts = {});

}  // namespace pc
