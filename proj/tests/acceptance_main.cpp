// Acceptance suite: one criterion per run block, one PASS/FAIL line each,
// nonzero exit if anything fails. Tolerances and instance counts are pinned
// here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "pc/energy.hpp"
#include "pc/errors.hpp"
#include "pc/gaps.hpp"
#include "pc/paircorr.hpp"
#include "pc/sequences.hpp"
#include "pc/structure.hpp"
#include "pc/witness.hpp"

using namespace pc;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int idx, const char* name, bool ok, const std::string& detail, double secs) {
  std::printf("%s  criterion %d: %-28s  %s  (%.1fs)\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::vector<CirclePoint> random_points(std::mt19937_64& rng, std::size_t n) {
  std::vector<CirclePoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(CirclePoint{rng(), 0.0});
  return pts;
}

AlphaSpec random_quadratic(std::mt19937_64& rng) {
  while (true) {
    BigInt d(2 + rng() % 400);
    BigInt r = isqrt(d);
    if (r * r == d) continue;
    BigInt p(static_cast<std::int64_t>(rng() % 41) - 20);
    BigInt q(1 + rng() % 6);
    if (rng() % 2) q = -q;
    return AlphaSpec::quadratic(p, q, d);
  }
}

// 1. r2_fast equals r2_naive exactly on 200 randomized instances.
void criterion_oracle_equivalence() {
  Timer t;
  std::mt19937_64 rng(101);
  std::size_t checked = 0, equal = 0;
  for (int inst = 0; inst < 200; ++inst) {
    std::size_t n = 2 + rng() % 1999;
    auto pts = random_points(rng, n);
    Rat s(1 + static_cast<long>(rng() % 10240), 1024);  // (0, 10]
    ++checked;
    if (r2_naive(pts, s).ordered_pairs == r2_fast(pts, s).ordered_pairs) ++equal;
  }
  bool ok = equal == checked && t.seconds() < 30.0;
  report(1, "oracle equivalence", ok,
         std::to_string(equal) + "/" + std::to_string(checked) + " instances bitwise equal", t.seconds());
}

// 2. Energy identities: dual route, identity closed form, Sidon closed form.
void criterion_energy_identities() {
  Timer t;
  std::mt19937_64 rng(202);
  bool ok = true;
  std::string detail;
  try {
    for (int inst = 0; inst < 100; ++inst) {
      std::size_t n = 2 + rng() % 999;
      std::set<long> vals;
      while (vals.size() < n) vals.insert(static_cast<long>(1 + rng() % 2000000));
      SequencePrefix p;
      for (long v : vals) p.values.emplace_back(v);
      p.sorted_increasing = true;
      (void)additive_energy(p);  // throws internal_mismatch if the routes disagree
    }
    // identity closed form N^2 + (N-1)N(2N-1)/3; brute-forced at N=4 -> 44
    {
      SequencePrefix p4 = generate(GeneratorSpec::parse("id"), 4, 0);
      BigInt brute = 0;
      for (const auto& a : p4.values)
        for (const auto& b : p4.values)
          for (const auto& c : p4.values)
            for (const auto& d : p4.values)
              if (a + b == c + d) ++brute;
      if (brute != 44) throw Error(Errc::internal_mismatch, "N=4 enumeration != 44");
    }
    for (std::size_t n : {4ul, 100ul, 787ul}) {
      auto p = generate(GeneratorSpec::parse("id"), n, 0);
      BigInt nn(n);
      if (additive_energy(p).energy != nn * nn + (nn - 1) * nn * (2 * nn - 1) / 3)
        throw Error(Errc::internal_mismatch, "identity closed form at N=" + std::to_string(n));
    }
    // Sidon: powers of two
    for (std::size_t n : {3ul, 20ul}) {
      auto p = generate(GeneratorSpec::parse("lac:2"), n, 0);
      BigInt nn(n);
      if (additive_energy(p).energy != 2 * nn * nn - nn)
        throw Error(Errc::internal_mismatch, "Sidon closed form at N=" + std::to_string(n));
    }
    detail = "100 dual-route prefixes + closed forms exact";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(2, "energy identities", ok, detail, t.seconds());
}

// 3. Three-gap corpus: 500 randomized (quadratic alpha, M <= 1e5).
void criterion_three_gap_corpus() {
  Timer t;
  std::mt19937_64 rng(303);
  bool ok = true;
  std::string detail;
  std::size_t gap_checks = 0, column_checks = 0;
  try {
    for (int inst = 0; inst < 500; ++inst) {
      AlphaSpec alpha = random_quadratic(rng);
      BigInt m(2 + rng() % 100000);
      auto cf = ContinuedFraction::expand(alpha, 64);
      auto fixed = resolve_alpha(alpha, recommended_precision_bits(m, m));
      auto d = decompose(fixed, cf, m);  // throws on any structural violation
      if (neighbor_gap_values(d.points).size() > 3)
        throw Error(Errc::invariant_violation, "more than three neighbor gaps");
      ++gap_checks;
      std::size_t q = d.bundle_count();
      if (q < 3) continue;
      for (int triple = 0; triple < 50; ++triple) {
        std::size_t col = 1 + rng() % (to_size(d.loc.b) + 1);
        if (!d.column_complete(col)) continue;
        std::size_t step = 1 + rng() % (q - 1);
        auto values = column_step_distances(d, col, step);  // throws if > 2 values
        if (values.empty() || values.size() > 2)
          throw Error(Errc::invariant_violation, "column step cardinality");
        ++column_checks;
      }
    }
    detail = std::to_string(gap_checks) + " decompositions, " + std::to_string(column_checks) +
             " column checks clean";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  ok = ok && t.seconds() < 120.0;
  report(3, "three-gap corpus", ok, detail, t.seconds());
}

// 4. Counting bounds hold on 1000 randomized instances each.
void criterion_counting_bounds() {
  Timer t;
  std::mt19937_64 rng(404);
  std::size_t bad = 0;
  std::string detail;
  try {
    for (int inst = 0; inst < 1000; ++inst) {
      CrowdingConfig cfg;
      std::uint64_t ratio = 2 + rng() % 12;
      cfg.tau = Rat(1, 1 + static_cast<long>(rng() % 40));
      cfg.length = Rat(BigInt(ratio)) * cfg.tau;
      cfg.sigma = BigInt(2 + rng() % 6);
      std::size_t L = to_size((BigInt(ratio) + 1) * cfg.sigma);
      std::vector<Rat> pts;
      for (std::size_t j = 0; j < L; ++j)
        pts.push_back(cfg.length * Rat(BigInt(rng() % 8192), 8192));
      if (!check_interval_crowding(cfg, pts).holds) ++bad;
    }
    for (int inst = 0; inst < 1000; ++inst) {
      std::uint64_t ratio = 2 + rng() % 8;
      Rat tau(1, 1 + static_cast<long>(rng() % 16));
      Rat length = Rat(BigInt(ratio)) * tau;
      std::size_t q = 1 + rng() % 6;
      std::uint64_t psi = 3 + rng() % 4;
      std::size_t total = to_size(BigInt((ratio + 1) * q * psi));
      std::vector<std::vector<Rat>> iv(q);
      for (std::size_t j = 0; j < total; ++j)
        iv[rng() % q].push_back(length * Rat(BigInt(rng() % 8192), 8192));
      if (!check_split_crowding(length, tau, iv).holds) ++bad;
    }
    for (int inst = 0; inst < 1000; ++inst) {
      Rat rho(1 + static_cast<long>(rng() % 8), 8);
      BigInt total = ceil_rat(Rat(16) / (rho * rho)) + BigInt(rng() % 400);
      std::size_t count = to_size(ceil_rat(rho * Rat(total)) - 1);
      std::vector<BigInt> gaps(count, BigInt(1));
      BigInt budget = total - BigInt(count);
      for (std::size_t j = 0; j < count && budget > 0; ++j) {
        BigInt add(rng() % 4);
        if (add > budget) add = budget;
        gaps[j] += add;
        budget -= add;
      }
      if (!most_frequent_small_gap(gaps, rho, total).holds) ++bad;
    }
    detail = "3000 instances, " + std::to_string(bad) + " violations";
  } catch (const std::exception& e) {
    bad = 1;
    detail = e.what();
  }
  report(4, "counting bounds", bad == 0, detail, t.seconds());
}

std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  double x = static_cast<double>(lo);
  while (x <= static_cast<double>(hi) * 1.0001) {
    auto n = static_cast<std::size_t>(std::llround(x));
    if (out.empty() || n > out.back()) out.push_back(n);
    x *= std::pow(10.0, 0.25);
  }
  return out;
}

// 5. Kronecker witnesses for identity at c = K = 1, three quadratic alphas.
void criterion_kronecker_witness() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    auto grid = geometric_grid(1000, 1000000);
    auto prefix = generate(GeneratorSpec::parse("id"), grid.back(), 0);
    auto cert = detect_quasi_arithmetic(prefix, Rat(1), Rat(1), 1);
    if (!cert) throw Error(Errc::bad_spec, "identity certificate missing");
    for (const char* alpha_text : {"quad:1,2,5", "quad:0,1,2", "quad:0,1,3"}) {
      Timer per_alpha;
      AlphaSpec alpha = AlphaSpec::parse(alpha_text);
      // confirm the deviation scale with the quadratic reference scan first
      {
        std::size_t n0 = 2000;
        std::vector<std::size_t> ns = {n0};
        auto s0 = witness_search(prefix, alpha, *cert, ns, {});
        if (s0.reports.empty() || s0.reports[0].s_label.empty())
          throw Error(Errc::bad_spec, "no small-N report");
        const auto& rep = s0.reports[0];
        auto pos = rep.s_label.find(" s2=");
        Rat s1 = parse_rat(rep.s_label.substr(3, pos - 3));
        Rat s2 = parse_rat(rep.s_label.substr(pos + 4));
        SequencePrefix sub;
        sub.values.assign(prefix.values.begin(), prefix.values.begin() + n0);
        sub.sorted_increasing = true;
        auto fixed = resolve_alpha(alpha, recommended_precision_bits(BigInt(n0), BigInt(n0)));
        auto pts = frac_parts(fixed, sub.values);
        double naive =
            (double(r2_naive(pts, s2).ordered_pairs) - double(r2_naive(pts, s1).ordered_pairs)) / n0;
        if (std::abs(naive - rep.measured) > 1e-12)
          throw Error(Errc::internal_mismatch, "naive confirmation differs");
      }
      auto summary = witness_search(prefix, alpha, *cert, grid, {});
      if (summary.max_abs_deviation < 0.5) {
        ok = false;
        detail += std::string(alpha_text) + " max dev " + std::to_string(summary.max_abs_deviation) + "; ";
      } else {
        detail += std::string(alpha_text) + " dev " + std::to_string(summary.max_abs_deviation) +
                  " @N=" + std::to_string(summary.best_n) + "; ";
      }
      if (per_alpha.seconds() > 300.0) {
        ok = false;
        detail += "overtime; ";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, "kronecker witness", ok, detail, t.seconds());
}

// 6. Density corollary: 10 pinned random quadratic alphas, deviation >= 0.2.
void criterion_density_corollary() {
  Timer t;
  std::mt19937_64 rng(606);
  bool ok = true;
  std::string detail;
  try {
    std::vector<std::size_t> ns = {10000, 100000, 1000000};
    double min_best = 1e30;
    for (int inst = 0; inst < 10; ++inst) {
      AlphaSpec alpha = random_quadratic(rng);
      std::uint64_t seed = rng();
      auto prefix = generate(GeneratorSpec::parse("density:0.5"), ns.back(), seed);
      auto cert = detect_quasi_arithmetic(prefix, Rat(1, 2), Rat(2), 1);
      if (!cert) throw Error(Errc::bad_spec, "density certificate missing");
      double best = 0.0;
      for (std::size_t n : ns) {
        std::vector<std::size_t> single = {n};
        auto summary = witness_search(prefix, alpha, *cert, single, {});
        best = std::max(best, summary.max_abs_deviation);
        if (best >= 0.2) break;  // witness found at this alpha
      }
      min_best = std::min(min_best, best);
      if (best < 0.2) ok = false;
    }
    detail = "min over 10 alphas of best |deviation| = " + std::to_string(min_best);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  ok = ok && t.seconds() < 900.0;
  report(6, "density corollary", ok, detail, t.seconds());
}

// 7. Poisson control: squares with alpha = sqrt2 - 1 at N = 1e5.
void criterion_poisson_control() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    auto prefix = generate(GeneratorSpec::parse("squares"), 100000, 0);
    AlphaSpec alpha = AlphaSpec::parse("quad:0,1,2");
    auto fixed = resolve_alpha(
        alpha, recommended_precision_bits(prefix.max_value(), BigInt(prefix.size())));
    auto points = frac_parts(fixed, prefix.values);
    std::vector<Rat> s_list = {Rat(1, 2), Rat(1), Rat(2)};
    for (const auto& st : r2_curve(points, s_list)) {
      double rel = std::abs(st.value() - st.poisson_ref()) / st.poisson_ref();
      detail += "s=" + rat_string(st.s) + " rel=" + std::to_string(rel) + "; ";
      if (rel > 0.15) ok = false;
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(7, "poisson control", ok, detail, t.seconds());
}

// 8. Classifier totality and symbolic grid span coverage, exact arithmetic.
void criterion_classifier_and_grids() {
  Timer t;
  std::mt19937_64 rng(808);
  bool ok = true;
  std::string detail;
  std::size_t classified = 0;
  try {
    auto pow_rat = [](const Rat& x, unsigned e) {
      Rat out(1);
      for (unsigned i = 0; i < e; ++i) out *= x;
      return out;
    };
    for (int inst = 0; inst < 10000; ++inst) {
      CaseContext ctx;
      ctx.n = 2 + rng() % (std::size_t(1) << (10 + rng() % 30));
      long q = static_cast<long>(1 + rng() % 1000000);
      long a = static_cast<long>(1 + rng() % (1l << (rng() % 26)));
      long b = static_cast<long>(1 + rng() % a);
      ctx.loc.q = q;
      ctx.loc.a = a;
      ctx.loc.b = b;
      ctx.loc.m = BigInt(b) * q;
      ctx.m = ctx.loc.m;
      ctx.c = Rat(1 + static_cast<long>(rng() % 8), 8);
      ctx.k_factor = Rat(1 + static_cast<long>(rng() % 6));
      ctx.gamma = ctx.c;
      ctx.cap_gamma = ctx.k_factor;
      ctx.w = ceil_rat(ctx.c * Rat(BigInt(ctx.n)));
      // delta strictly inside the structural bounds
      ctx.delta = (Rat(1, BigInt(q) * (a + 2)) + Rat(1, BigInt(q) * a)) / 2;
      WitnessCase w = classify_case(ctx);
      ++classified;
      // the selected case's defining inequalities must hold exactly
      Rat inv_n(1, BigInt(ctx.n));
      Rat q_rat{BigInt(q)};
      Rat c5 = pow_rat(ctx.c, 5);
      bool cond_ok = true;
      switch (w) {
        case WitnessCase::case4:
          cond_ok = inv_n >= c5 / (ctx.k_factor * Rat(pow2(29)) * q_rat);
          break;
        case WitnessCase::case2:
          cond_ok = Rat(a, b) <= Rat(pow2(23)) / (ctx.c * ctx.c) &&
                    inv_n < c5 / (ctx.k_factor * Rat(pow2(23)) * q_rat);
          break;
        case WitnessCase::case1:
          cond_ok = Rat(b) * ctx.delta >= Rat(128) / (ctx.c * Rat(BigInt(ctx.n))) &&
                    Rat(a, b) >= Rat(pow2(23)) / (ctx.c * ctx.c);
          break;
        case WitnessCase::case3:
          cond_ok = Rat(b) * ctx.delta <= Rat(128) / (ctx.c * Rat(BigInt(ctx.n))) &&
                    inv_n < c5 / (ctx.k_factor * Rat(pow2(29)) * q_rat);
          break;
      }
      if (!cond_ok) throw Error(Errc::invariant_violation, "case conditions violated");
    }
    // symbolic span coverage for random (c, K)
    for (int i = 0; i < 200; ++i) {
      Rat c(1 + static_cast<long>(rng() % 16), 16);
      Rat K(1 + static_cast<long>(rng() % 8));
      auto g2 = case2_threshold_grid(c, K);
      if (!(g2.start <= c * c / (3 * Rat(pow2(23)) * K))) throw Error(Errc::invariant_violation, "D low");
      if (!(g2.span_end() >= Rat(128) * K / c)) throw Error(Errc::invariant_violation, "D high");
      auto g4 = case4_threshold_grid(c, K);
      Rat c7 = pow_rat(c, 7);
      if (!(g4.start <= Rat(1) / (2 * K))) throw Error(Errc::invariant_violation, "E low");
      if (!(g4.span_end() >= Rat(pow2(32)) * K * K * (4 * K * K) / c7))
        throw Error(Errc::invariant_violation, "E high");
    }
    detail = std::to_string(classified) + " contexts classified, spans verified symbolically";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(8, "classifier and grids", ok, detail, t.seconds());
}

// 9. Detector round trip on constructive generators; squares yield none.
void criterion_detector_round_trip() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    auto ap = generate(GeneratorSpec::parse("ap:5,7"), 500, 0);
    auto c1 = detect_quasi_arithmetic(ap, Rat(1), Rat(1), 8);
    if (!c1 || !verify_certificate(ap, *c1) || c1->ap_step != 7) {
      ok = false;
      detail += "ap:5,7 failed; ";
    }
    auto un = generate(GeneratorSpec::parse("aps:1,6+3,6"), 500, 0);
    auto c2 = detect_quasi_arithmetic(un, Rat(1), Rat(3), 8);
    if (!c2 || !verify_certificate(un, *c2)) {
      ok = false;
      detail += "aps failed; ";
    }
    auto sq = generate(GeneratorSpec::parse("squares"), 1000, 0);
    auto c3 = detect_quasi_arithmetic(sq, Rat(1, 2), Rat(4), 100);
    if (c3) {
      ok = false;
      detail += "squares unexpectedly certified; ";
    }
    if (ok) detail = "ap + union certified and verified, squares none";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(9, "detector round trip", ok, detail, t.seconds());
}

}  // namespace

int main() {
  Timer total;
  criterion_oracle_equivalence();
  criterion_energy_identities();
  criterion_three_gap_corpus();
  criterion_counting_bounds();
  criterion_kronecker_witness();
  criterion_density_corollary();
  criterion_poisson_control();
  criterion_classifier_and_grids();
  criterion_detector_round_trip();
  std::printf("%s: %d criterion(s) failed (total %.1fs)\n", failures ? "FAILURE" : "SUCCESS",
              failures, total.seconds());
  return failures ? 1 : 0;
}
