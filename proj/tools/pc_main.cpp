// pc: pair correlation toolkit CLI.
//
// Subcommands: cf, r2, energy, gaps, detect, witness, experiment.
// Exit codes: 0 success / witness found, 1 computation error or witness below
// margin, 2 usage error, 3 precision exhausted.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pc/energy.hpp"
#include "pc/errors.hpp"
#include "pc/experiments.hpp"
#include "pc/gaps.hpp"
#include "pc/paircorr.hpp"
#include "pc/sequences.hpp"
#include "pc/structure.hpp"
#include "pc/version.hpp"
#include "pc/witness.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Emitted output always opens with the tool version and the canonical
// config; re-running the config reproduces the file byte for byte.
std::string header(const std::string& config) {
  return "# pc " + std::string(pc::kVersion) + "\n# config: " + config + "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) pc::fail(pc::Errc::bad_spec, "cannot write " + path);
    out << content;
  }
  std::filesystem::rename(tmp, target);
}

std::vector<pc::Rat> parse_rat_list(const std::string& text) {
  std::vector<pc::Rat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(pc::parse_rat(item));
  if (out.empty()) pc::fail(pc::Errc::parse_error, "empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(pc::to_size(pc::parse_bigint(item)));
  if (out.empty()) pc::fail(pc::Errc::parse_error, "empty list");
  return out;
}

pc::SequencePrefix make_prefix(const std::string& seq, std::size_t n, std::uint64_t seed) {
  return pc::generate(pc::GeneratorSpec::parse(seq), n, seed);
}

std::vector<pc::CirclePoint> points_for(const pc::AlphaSpec& alpha, const pc::SequencePrefix& prefix) {
  pc::BigInt max_term = prefix.max_value();
  pc::FixedAlpha fixed =
      pc::resolve_alpha(alpha, pc::recommended_precision_bits(max_term, pc::BigInt(prefix.size())));
  return pc::frac_parts(fixed, prefix.values);
}

ordered_json cert_json(const pc::QuasiArithCertificate& cert) {
  ordered_json j;
  j["c"] = pc::rat_string(cert.c);
  j["K"] = pc::rat_string(cert.k_factor);
  j["degree"] = cert.degree;
  j["N"] = cert.n;
  j["h"] = cert.ap_offset.str();
  j["k"] = cert.ap_step.str();
  j["length"] = cert.ap_length.str();
  j["members"] = cert.member_indices.size();
  j["gamma"] = pc::rat_string(cert.gamma());
  j["Gamma"] = pc::rat_string(cert.cap_gamma());
  j["normalized"] = cert.normalized();
  return j;
}

int cmd_cf(const std::string& alpha_text, std::size_t terms, const std::string& output) {
  auto cf = pc::ContinuedFraction::expand(pc::AlphaSpec::parse(alpha_text), terms);
  std::string body = header("cf --alpha " + alpha_text + " --terms " + std::to_string(terms));
  body += "l,a_l,p_l,q_l\n";
  for (std::size_t l = 1; l <= cf.digits().size(); ++l) {
    body += std::to_string(l) + "," + cf.digits()[l - 1].str() + "," + cf.conv(l).num.str() + "," +
            cf.conv(l).den.str() + "\n";
  }
  write_output(output, body);
  return 0;
}

int cmd_r2(const std::string& alpha_text, const std::string& seq, std::size_t n,
           const std::string& s_text, std::uint64_t seed, bool naive, const std::string& output) {
  auto prefix = make_prefix(seq, n, seed);
  auto points = points_for(pc::AlphaSpec::parse(alpha_text), prefix);
  auto s_list = parse_rat_list(s_text);
  std::string body = header("r2 --alpha " + alpha_text + " --seq " + seq + " --N " +
                            std::to_string(n) + " --s " + s_text + " --seed " +
                            std::to_string(seed) + (naive ? " --naive" : ""));
  body += "N,s,pair_count,value,poisson_ref\n";
  if (naive) {
    for (const auto& s : s_list) {
      auto st = pc::r2_naive(points, s);
      body += std::to_string(st.n) + "," + pc::rat_string(st.s) + "," +
              std::to_string(st.ordered_pairs) + "," + fmt(st.value()) + "," +
              fmt(st.poisson_ref()) + "\n";
    }
  } else {
    for (const auto& st : pc::r2_curve(points, s_list)) {
      body += std::to_string(st.n) + "," + pc::rat_string(st.s) + "," +
              std::to_string(st.ordered_pairs) + "," + fmt(st.value()) + "," +
              fmt(st.poisson_ref()) + "\n";
    }
  }
  write_output(output, body);
  return 0;
}

int cmd_energy(const std::string& seq, const std::string& n_text, std::uint64_t seed, bool profile,
               std::size_t cap, const std::string& output) {
  auto n_list = parse_size_list(n_text);
  pc::EnergyOptions opts;
  if (cap) opts.max_n = cap;
  std::string config = "energy --seq " + seq + " --N " + n_text + " --seed " + std::to_string(seed) +
                       (profile ? " --profile" : "") +
                       (cap ? " --cap " + std::to_string(cap) : "");
  std::string body = header(config);
  if (profile) {
    auto prefix = make_prefix(seq, n_list.back(), seed);
    opts.materialize_profile = true;
    auto prof = pc::difference_profile(prefix, opts);
    body += "v,count\n";
    for (const auto& [v, cnt] : prof.diff_counts) body += v.str() + "," + std::to_string(cnt) + "\n";
  } else {
    body += "N,E,ratio\n";
    auto full = make_prefix(seq, n_list.back(), seed);
    for (std::size_t n : n_list) {
      pc::SequencePrefix sub;
      sub.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(n));
      sub.sorted_increasing = full.sorted_increasing;
      sub.label = full.label;
      auto prof = pc::additive_energy(sub, opts);
      body += std::to_string(n) + "," + prof.energy.str() + "," + fmt(prof.ratio) + "\n";
    }
  }
  write_output(output, body);
  return 0;
}

int cmd_gaps(const std::string& alpha_text, const std::string& m_text, std::size_t column,
             std::size_t step, const std::string& output) {
  auto alpha = pc::AlphaSpec::parse(alpha_text);
  pc::BigInt m = pc::parse_bigint(m_text);
  auto cf = pc::ContinuedFraction::expand(alpha, 64);
  auto fixed = pc::resolve_alpha(alpha, pc::recommended_precision_bits(m, m));
  auto d = pc::decompose(fixed, cf, m);
  std::string config = "gaps --alpha " + alpha_text + " --M " + m_text;
  if (column) config += " --column " + std::to_string(column) + " --step " + std::to_string(step);
  std::string body = header(config);
  body += "# q=" + d.loc.q.str() + " a=" + d.loc.a.str() + " b=" + d.loc.b.str() +
          " l=" + std::to_string(d.loc.l) + " delta=" + pc::rat_string(d.delta) + "\n";
  if (column) {
    body += "step_distance\n";
    for (const auto& v : pc::column_step_distances(d, column, step))
      body += fmt(pc::to_double(v)) + "\n";
  } else {
    auto gaps = pc::neighbor_gap_values(d.points);
    body += "# distinct_neighbor_gaps=" + std::to_string(gaps.size()) + "\n";
    body += "bundle,size,first,last\n";
    for (std::size_t p = 0; p < d.bundle_count(); ++p) {
      auto bu = d.bundle(p);
      body += std::to_string(p) + "," + std::to_string(bu.size()) + "," +
              fmt(bu.front().position()) + "," + fmt(bu.back().position()) + "\n";
    }
  }
  write_output(output, body);
  return 0;
}

int cmd_detect(const std::string& seq, std::size_t n, const std::string& c_text,
               const std::string& k_text, std::size_t k_max, std::uint64_t seed,
               const std::string& output) {
  auto prefix = make_prefix(seq, n, seed);
  auto cert = pc::detect_quasi_arithmetic(prefix, pc::parse_rat(c_text), pc::parse_rat(k_text), k_max);
  ordered_json j = cert ? cert_json(*cert) : ordered_json(nullptr);
  write_output(output, j.dump(2) + "\n");
  return 0;
}

int cmd_witness(const std::string& seq, const std::string& alpha_text, const std::string& c_text,
                const std::string& k_text, const std::string& n_text, double margin,
                std::size_t budget, std::size_t k_max, std::uint64_t seed,
                const std::string& output) {
  auto n_list = parse_size_list(n_text);
  auto prefix = make_prefix(seq, n_list.back(), seed);
  auto alpha = pc::AlphaSpec::parse(alpha_text);
  auto cert = pc::detect_quasi_arithmetic(prefix, pc::parse_rat(c_text), pc::parse_rat(k_text), k_max);
  if (!cert)
    pc::fail(pc::Errc::bad_spec,
             "witness search requires a certificate; none found at c=" + c_text + " K=" + k_text);
  pc::WitnessOptions wo;
  wo.margin = margin;
  wo.s_budget = budget;
  auto summary = pc::witness_search(prefix, alpha, *cert, n_list, wo);
  ordered_json j;
  j["config"] = "witness --seq " + seq + " --alpha " + alpha_text + " --c " + c_text + " --K " +
                k_text + " --N " + n_text + " --margin " + fmt(margin) + " --seed " +
                std::to_string(seed);
  j["version"] = pc::kVersion;
  j["certificate"] = cert_json(*cert);
  j["reports"] = ordered_json::array();
  for (const auto& rep : summary.reports) {
    ordered_json r;
    r["N"] = rep.n;
    r["case"] = pc::witness_case_name(rep.case_id);
    r["s"] = rep.s_label;
    r["measured"] = rep.measured;
    r["poisson_ref"] = rep.poisson_ref;
    r["deviation"] = rep.deviation;
    r["floor_ref"] = rep.floor_ref;
    r["subset_pairs"] = rep.subset_pairs;
    r["full_pairs"] = rep.full_pairs;
    r["notes"] = rep.notes;
    j["reports"].push_back(std::move(r));
  }
  j["max_abs_deviation"] = summary.max_abs_deviation;
  j["best_N"] = summary.best_n;
  j["witness_found"] = summary.witness_found;
  write_output(output, j.dump(2) + "\n");
  return summary.witness_found ? 0 : 1;
}

int cmd_experiment(const std::string& preset, std::size_t n, std::uint64_t seed,
                   std::size_t instances, double margin, const std::string& output) {
  pc::ExperimentParams params;
  params.n = n;
  params.seed = seed;
  params.instances = instances;
  params.margin = margin;
  auto res = pc::run_experiment(preset, params);
  std::string body = header("experiment " + preset + " --N " + std::to_string(n) + " --seed " +
                            std::to_string(seed) +
                            (instances ? " --instances " + std::to_string(instances) : ""));
  std::string cols;
  for (std::size_t i = 0; i < res.header.size(); ++i) cols += (i ? "," : "") + res.header[i];
  body += cols + "\n";
  for (const auto& row : res.rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "," : "") + row[i];
    body += line + "\n";
  }
  body += "# summary: " + res.summary + "\n";
  write_output(output, body);
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pair correlation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("pc ") + pc::kVersion);

  std::string alpha_text, seq = "id", s_text = "1", output, n_text, c_text = "1", k_text = "1";
  std::string m_text, preset;
  std::size_t n = 1000, terms = 32, column = 0, step = 1, k_max = 64, budget = 8, instances = 0;
  std::size_t cap = 0;
  std::uint64_t seed = 0;
  double margin = 0.2;
  bool naive = false, profile = false;

  auto* cf = app.add_subcommand("cf", "continued fraction digits and convergents");
  cf->add_option("--alpha", alpha_text, "alpha spec (rat:p/q | quad:P,Q,D | cf:a1,a2,...[;period])")
      ->required();
  cf->add_option("--terms", terms, "number of digits");
  cf->add_option("--output", output, "output path ('-' = stdout)");

  auto* r2 = app.add_subcommand("r2", "pair correlation statistic");
  r2->add_option("--alpha", alpha_text)->required();
  r2->add_option("--seq", seq, "sequence spec (id | ap:h,k | squares | lac:2 | density:0.5 | aps:... | file:path)");
  r2->add_option("--N", n)->required();
  r2->add_option("--s", s_text, "comma list of thresholds");
  r2->add_option("--seed", seed);
  r2->add_flag("--naive", naive, "use the quadratic reference scan");
  r2->add_option("--output", output);

  auto* en = app.add_subcommand("energy", "difference profile and additive energy");
  en->add_option("--seq", seq);
  en->add_option("--N", n_text, "comma list of prefix lengths")->required();
  en->add_option("--seed", seed);
  en->add_flag("--profile", profile, "dump v, A_N(v) instead of the energy curve");
  en->add_option("--cap", cap, "raise the N cap for the O(N^2) computation");
  en->add_option("--output", output);

  auto* gp = app.add_subcommand("gaps", "bundle decomposition of {j alpha}, j <= M");
  gp->add_option("--alpha", alpha_text)->required();
  gp->add_option("--M", m_text)->required();
  gp->add_option("--column", column, "emit step distances for this column (1-based)");
  gp->add_option("--step", step, "column step (with --column)");
  gp->add_option("--output", output);

  auto* de = app.add_subcommand("detect", "degree-1 quasi-arithmetic certificate search");
  de->add_option("--seq", seq);
  de->add_option("--N", n)->required();
  de->add_option("--c", c_text, "density constant in (0,1]");
  de->add_option("--K", k_text, "size constant >= 1");
  de->add_option("--kmax", k_max);
  de->add_option("--seed", seed);
  de->add_option("--output", output);

  auto* wi = app.add_subcommand("witness", "search for non-Poissonian witnesses");
  wi->add_option("--seq", seq);
  wi->add_option("--alpha", alpha_text)->required();
  wi->add_option("--c", c_text);
  wi->add_option("--K", k_text);
  wi->add_option("--N", n_text, "comma list of prefix lengths")->required();
  wi->add_option("--margin", margin, "|deviation| needed to declare a witness");
  wi->add_option("--budget", budget, "candidate thresholds per N");
  wi->add_option("--kmax", k_max);
  wi->add_option("--seed", seed);
  wi->add_option("--output", output);

  auto* ex = app.add_subcommand("experiment", "named experiment presets");
  ex->add_option("preset", preset, "kronecker-null | density-corollary | poisson-control | lemma-suite | gap-audit")
      ->required();
  ex->add_option("--N", n, "scale knob");
  ex->add_option("--seed", seed);
  ex->add_option("--instances", instances);
  ex->add_option("--margin", margin);
  ex->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cf->parsed()) return cmd_cf(alpha_text, terms, output);
    if (r2->parsed()) return cmd_r2(alpha_text, seq, n, s_text, seed, naive, output);
    if (en->parsed()) return cmd_energy(seq, n_text, seed, profile, cap, output);
    if (gp->parsed()) return cmd_gaps(alpha_text, m_text, column, step, output);
    if (de->parsed()) return cmd_detect(seq, n, c_text, k_text, k_max, seed, output);
    if (wi->parsed())
      return cmd_witness(seq, alpha_text, c_text, k_text, n_text, margin, budget, k_max, seed, output);
    if (ex->parsed()) return cmd_experiment(preset, n, seed, instances, margin, output);
  } catch (const pc::Error& e) {
    std::cerr << "pc: " << e.what() << "\n";
    return e.code() == pc::Errc::precision_exhausted ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "pc: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
