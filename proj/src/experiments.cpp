#include "pc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pc/energy.hpp"
#include "pc/errors.hpp"
#include "pc/gaps.hpp"
#include "pc/paircorr.hpp"
#include "pc/sequences.hpp"
#include "pc/structure.hpp"
#include "pc/witness.hpp"

namespace pc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi, std::size_t per_decade) {
  std::vector<std::size_t> out;
  double x = static_cast<double>(lo);
  double factor = std::pow(10.0, 1.0 / static_cast<double>(per_decade));
  while (x <= static_cast<double>(hi) * 1.0000001) {
    auto n = static_cast<std::size_t>(std::llround(x));
    if (out.empty() || n > out.back()) out.push_back(n);
    x *= factor;
  }
  return out;
}

// random quadratic irrational with small coefficients
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

QuasiArithCertificate full_identity_certificate(const SequencePrefix& prefix) {
  auto cert = detect_quasi_arithmetic(prefix, Rat(1), Rat(1), 1);
  if (!cert) fail(Errc::bad_spec, "identity certificate not found");
  return *cert;
}

ExperimentResult kronecker_null(const ExperimentParams& params) {
  ExperimentResult res;
  res.header = {"alpha", "N", "case", "s", "measured", "poisson_ref", "deviation"};
  double worst = 0.0;
  auto grid = geometric_grid(1000, params.n, 4);
  for (const char* spec_text : {"quad:1,2,5", "quad:0,1,2"}) {
    AlphaSpec alpha = AlphaSpec::parse(spec_text);
    SequencePrefix prefix = generate(GeneratorSpec::parse("id"), grid.back(), params.seed);
    auto cert = full_identity_certificate(prefix);
    WitnessOptions wo;
    wo.margin = params.margin;
    auto summary = witness_search(prefix, alpha, cert, grid, wo);
    for (const auto& rep : summary.reports) {
      res.rows.push_back({spec_text, std::to_string(rep.n), witness_case_name(rep.case_id),
                          rep.s_label, fmt(rep.measured), fmt(rep.poisson_ref), fmt(rep.deviation)});
      worst = std::max(worst, std::abs(rep.deviation));
    }
  }
  res.ok = worst >= params.margin;
  res.summary = "max |deviation| = " + fmt(worst) + (res.ok ? " (witness found)" : " (below margin)");
  return res;
}

ExperimentResult density_corollary(const ExperimentParams& params) {
  ExperimentResult res;
  res.header = {"alpha", "seed", "N", "case", "s", "measured", "deviation"};
  std::mt19937_64 rng(params.seed);
  std::size_t count = params.instances ? params.instances : 5;
  double min_best = -1.0;
  std::vector<std::size_t> grid;
  for (std::size_t n = 10000; n <= params.n; n *= 10) grid.push_back(n);
  if (grid.empty()) grid.push_back(params.n);
  for (std::size_t i = 0; i < count; ++i) {
    AlphaSpec alpha = random_quadratic(rng);
    std::uint64_t sseed = rng();
    SequencePrefix prefix =
        generate(GeneratorSpec::parse("density:0.5"), grid.back(), sseed);
    auto cert = detect_quasi_arithmetic(prefix, Rat(1, 2), Rat(2), 1);
    if (!cert) fail(Errc::bad_spec, "density certificate not found");
    WitnessOptions wo;
    wo.margin = params.margin;
    auto summary = witness_search(prefix, alpha, *cert, grid, wo);
    double best = 0.0;
    for (const auto& rep : summary.reports) {
      res.rows.push_back({alpha.to_string(), std::to_string(sseed), std::to_string(rep.n),
                          witness_case_name(rep.case_id), rep.s_label, fmt(rep.measured),
                          fmt(rep.deviation)});
      best = std::max(best, std::abs(rep.deviation));
    }
    min_best = min_best < 0 ? best : std::min(min_best, best);
  }
  res.ok = min_best >= params.margin;
  res.summary = "min over alphas of max |deviation| = " + fmt(min_best);
  return res;
}

ExperimentResult poisson_control(const ExperimentParams& params) {
  ExperimentResult res;
  res.header = {"seq", "alpha", "N", "s", "value", "poisson_ref", "rel_err"};
  AlphaSpec alpha = AlphaSpec::parse("quad:0,1,2");
  std::vector<Rat> s_list = {Rat(1, 2), Rat(1), Rat(2)};
  double worst = 0.0;
  for (const char* seq : {"squares"}) {
    SequencePrefix prefix = generate(GeneratorSpec::parse(seq), params.n, params.seed);
    BigInt max_term = prefix.max_value();
    FixedAlpha fixed = resolve_alpha(alpha, recommended_precision_bits(max_term, BigInt(prefix.size())));
    auto points = frac_parts(fixed, prefix.values);
    for (const auto& st : r2_curve(points, s_list)) {
      double rel = (st.value() - st.poisson_ref()) / st.poisson_ref();
      worst = std::max(worst, std::abs(rel));
      res.rows.push_back({seq, "quad:0,1,2", std::to_string(st.n), rat_string(st.s),
                          fmt(st.value()), fmt(st.poisson_ref()), fmt(rel)});
    }
  }
  res.ok = worst <= 0.15;
  res.summary = "max relative deviation from 2s = " + fmt(worst);
  return res;
}

ExperimentResult lemma_suite(const ExperimentParams& params) {
  ExperimentResult res;
  res.header = {"bound", "instances", "failures", "min_margin"};
  std::mt19937_64 rng(params.seed);
  std::size_t instances = params.instances ? params.instances : 1000;

  // single-interval crowding
  std::size_t fail1 = 0;
  double margin1 = 1e30;
  for (std::size_t i = 0; i < instances; ++i) {
    CrowdingConfig cfg;
    std::uint64_t ratio = 2 + rng() % 12;
    cfg.tau = Rat(1, 1 + static_cast<long>(rng() % 50));
    cfg.length = Rat(BigInt(ratio)) * cfg.tau;
    cfg.sigma = BigInt(2 + rng() % 6);
    std::size_t L = to_size((BigInt(ratio) + 1) * cfg.sigma);
    std::vector<Rat> pts;
    for (std::size_t j = 0; j < L; ++j) {
      // random rational points in [0, B) on a fine lattice
      std::uint64_t grid = 1 + rng() % 10000;
      pts.push_back(cfg.length * Rat(BigInt(rng() % grid), BigInt(grid)));
    }
    auto out = check_interval_crowding(cfg, pts);
    if (!out.holds) ++fail1;
    margin1 = std::min(margin1, to_double(Rat(BigInt(out.close_pairs)) - out.bound));
  }
  res.rows.push_back({"interval_crowding", std::to_string(instances), std::to_string(fail1), fmt(margin1)});

  // split crowding
  std::size_t fail2 = 0;
  double margin2 = 1e30;
  for (std::size_t i = 0; i < instances; ++i) {
    std::uint64_t ratio = 2 + rng() % 8;
    Rat tau(1, 1 + static_cast<long>(rng() % 20));
    Rat length = Rat(BigInt(ratio)) * tau;
    std::size_t q = 1 + rng() % 6;
    std::uint64_t psi = 3 + rng() % 4;
    std::size_t total = to_size(BigInt((ratio + 1) * q * psi));
    std::vector<std::vector<Rat>> intervals(q);
    for (std::size_t j = 0; j < total; ++j) {
      std::uint64_t grid = 1 + rng() % 10000;
      intervals[rng() % q].push_back(length * Rat(BigInt(rng() % grid), BigInt(grid)));
    }
    auto out = check_split_crowding(length, tau, intervals);
    if (!out.holds) ++fail2;
    margin2 = std::min(margin2, to_double(Rat(BigInt(out.close_pairs)) - out.bound));
  }
  res.rows.push_back({"split_crowding", std::to_string(instances), std::to_string(fail2), fmt(margin2)});

  // frequent small gap
  std::size_t fail3 = 0;
  double margin3 = 1e30;
  for (std::size_t i = 0; i < instances; ++i) {
    Rat rho(1 + static_cast<long>(rng() % 8), 8);
    BigInt total = ceil_rat(Rat(16) / (rho * rho)) + BigInt(rng() % 200);
    BigInt want = ceil_rat(rho * Rat(total)) - 1;
    std::size_t count = to_size(want);
    // random positive gaps with the sum budget enforced greedily
    std::vector<BigInt> gaps(count, BigInt(1));
    BigInt budget = total - BigInt(count);
    for (std::size_t j = 0; j < count && budget > 0; ++j) {
      BigInt add(rng() % 3);
      if (add > budget) add = budget;
      gaps[j] += add;
      budget -= add;
    }
    auto out = most_frequent_small_gap(gaps, rho, total);
    if (!out.holds) ++fail3;
    margin3 = std::min(margin3, to_double(Rat(BigInt(out.multiplicity)) - out.required));
  }
  res.rows.push_back({"frequent_small_gap", std::to_string(instances), std::to_string(fail3), fmt(margin3)});

  res.ok = fail1 == 0 && fail2 == 0 && fail3 == 0;
  res.summary = res.ok ? "all bounds held" : "bound violations found";
  return res;
}

ExperimentResult gap_audit(const ExperimentParams& params) {
  ExperimentResult res;
  res.header = {"alpha", "M", "q", "a", "b", "distinct_gaps", "columns_checked"};
  std::mt19937_64 rng(params.seed);
  std::size_t instances = params.instances ? params.instances : 100;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    AlphaSpec alpha = random_quadratic(rng);
    BigInt m(2 + rng() % std::max<std::uint64_t>(2, params.n));
    try {
      auto cf = ContinuedFraction::expand(alpha, 64);
      auto fixed = resolve_alpha(alpha, recommended_precision_bits(m, m));
      auto d = decompose(fixed, cf, m);
      auto gaps = neighbor_gap_values(d.points);
      std::size_t cols_checked = 0;
      std::size_t q = d.bundle_count();
      if (q >= 3) {
        for (std::size_t col = 1; col <= 2 && d.column_complete(col); ++col) {
          std::size_t step = 1 + rng() % (q - 1);
          column_step_distances(d, col, step);
          ++cols_checked;
        }
      }
      if (gaps.size() > 3) ++bad;
      res.rows.push_back({alpha.to_string(), m.str(), d.loc.q.str(), d.loc.a.str(), d.loc.b.str(),
                          std::to_string(gaps.size()), std::to_string(cols_checked)});
    } catch (const Error& e) {
      ++bad;
      res.rows.push_back({alpha.to_string(), m.str(), "-", "-", "-", e.what(), "0"});
    }
  }
  res.ok = bad == 0;
  res.summary = res.ok ? "corpus clean" : std::to_string(bad) + " violations";
  return res;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"kronecker-null", "density-corollary", "poisson-control", "lemma-suite", "gap-audit"};
}

ExperimentResult run_experiment(const std::string& preset, const ExperimentParams& params) {
  if (preset == "kronecker-null") return kronecker_null(params);
  if (preset == "density-corollary") return density_corollary(params);
  if (preset == "poisson-control") return poisson_control(params);
  if (preset == "lemma-suite") return lemma_suite(params);
  if (preset == "gap-audit") return gap_audit(params);
  fail(Errc::bad_spec, "unknown experiment preset '" + preset + "'");
}

}  // namespace pc
