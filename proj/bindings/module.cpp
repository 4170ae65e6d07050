// Python bindings for the core operations. Exact inputs cross the boundary
// as spec strings or python ints; values come back as floats, ints, or
// rational strings, matching what the CLI emits.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "pc/energy.hpp"
#include "pc/errors.hpp"
#include "pc/experiments.hpp"
#include "pc/gaps.hpp"
#include "pc/paircorr.hpp"
#include "pc/sequences.hpp"
#include "pc/structure.hpp"
#include "pc/version.hpp"
#include "pc/witness.hpp"

namespace py = pybind11;

namespace {

pc::BigInt from_py_int(const py::int_& v) {
  return pc::parse_bigint(py::cast<std::string>(py::str(static_cast<const py::object&>(v))));
}

py::int_ to_py_int(const pc::BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

pc::SequencePrefix prefix_from(const std::string& seq, std::size_t n, std::uint64_t seed) {
  return pc::generate(pc::GeneratorSpec::parse(seq), n, seed);
}

std::vector<pc::CirclePoint> points_from(const std::string& alpha, const pc::SequencePrefix& prefix) {
  auto spec = pc::AlphaSpec::parse(alpha);
  auto fixed = pc::resolve_alpha(
      spec, pc::recommended_precision_bits(prefix.max_value(), pc::BigInt(prefix.size())));
  return pc::frac_parts(fixed, prefix.values);
}

py::dict stat_dict(const pc::PairCorrStat& st) {
  py::dict d;
  d["N"] = st.n;
  d["s"] = pc::rat_string(st.s);
  d["pair_count"] = st.ordered_pairs;
  d["value"] = st.value();
  d["poisson_ref"] = st.poisson_ref();
  return d;
}

py::object detect_py(const std::string& seq, std::size_t n, const std::string& c,
                     const std::string& k_factor, std::size_t k_max, std::uint64_t seed) {
  auto prefix = prefix_from(seq, n, seed);
  auto cert = pc::detect_quasi_arithmetic(prefix, pc::parse_rat(c), pc::parse_rat(k_factor), k_max);
  if (!cert) return py::none();
  py::dict d;
  d["c"] = pc::rat_string(cert->c);
  d["K"] = pc::rat_string(cert->k_factor);
  d["N"] = cert->n;
  d["h"] = to_py_int(cert->ap_offset);
  d["k"] = to_py_int(cert->ap_step);
  d["length"] = to_py_int(cert->ap_length);
  d["members"] = cert->member_indices.size();
  d["normalized"] = cert->normalized();
  return d;
}

py::dict witness_py(const std::string& seq, const std::string& alpha, const std::string& c,
                    const std::string& k_factor, const std::vector<std::size_t>& n_list,
                    double margin, std::size_t k_max, std::uint64_t seed) {
  auto prefix = prefix_from(seq, n_list.empty() ? 0 : n_list.back(), seed);
  auto cert = pc::detect_quasi_arithmetic(prefix, pc::parse_rat(c), pc::parse_rat(k_factor), k_max);
  if (!cert) pc::fail(pc::Errc::bad_spec, "witness search requires a certificate");
  pc::WitnessOptions wo;
  wo.margin = margin;
  auto summary = pc::witness_search(prefix, pc::AlphaSpec::parse(alpha), *cert, n_list, wo);
  py::dict d;
  py::list reports;
  for (const auto& rep : summary.reports) {
    py::dict r;
    r["N"] = rep.n;
    r["case"] = pc::witness_case_name(rep.case_id);
    r["s"] = rep.s_label;
    r["measured"] = rep.measured;
    r["poisson_ref"] = rep.poisson_ref;
    r["deviation"] = rep.deviation;
    r["notes"] = rep.notes;
    reports.append(std::move(r));
  }
  d["reports"] = std::move(reports);
  d["max_abs_deviation"] = summary.max_abs_deviation;
  d["best_N"] = summary.best_n;
  d["witness_found"] = summary.witness_found;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pair correlation toolkit core";
  m.attr("__version__") = pc::kVersion;

  py::register_exception<pc::Error>(m, "PcError");

  m.def(
      "resolve_alpha",
      [](const std::string& spec, int bits) {
        auto fixed = pc::resolve_alpha(pc::AlphaSpec::parse(spec), bits);
        py::dict d;
        d["value"] = fixed.value();
        d["error_bound"] = pc::to_double(fixed.error_bound());
        d["precision_bits"] = fixed.precision_bits();
        return d;
      },
      py::arg("spec"), py::arg("bits") = 128,
      "Fixed-point alpha mod 1 with a tracked error bound.");

  m.def(
      "frac_parts",
      [](const std::string& spec, const std::vector<py::int_>& terms) {
        std::vector<pc::BigInt> ts;
        pc::BigInt mx = 1;
        for (const auto& t : terms) {
          ts.push_back(from_py_int(t));
          if (ts.back() > mx) mx = ts.back();
        }
        auto fixed = pc::resolve_alpha(
            pc::AlphaSpec::parse(spec), pc::recommended_precision_bits(mx, pc::BigInt(ts.size())));
        std::vector<double> out;
        for (const auto& p : pc::frac_parts(fixed, ts)) out.push_back(p.position());
        return out;
      },
      py::arg("spec"), py::arg("terms"), "Fractional parts {a_n * alpha} as floats.");

  m.def(
      "cf_digits",
      [](const std::string& spec, std::size_t terms) {
        auto cf = pc::ContinuedFraction::expand(pc::AlphaSpec::parse(spec), terms);
        std::vector<py::int_> out;
        for (const auto& d : cf.digits()) out.push_back(to_py_int(d));
        return out;
      },
      py::arg("spec"), py::arg("terms") = 32);

  m.def(
      "convergents",
      [](const std::string& spec, std::size_t count) {
        auto cf = pc::ContinuedFraction::expand(pc::AlphaSpec::parse(spec), count + 1);
        std::vector<std::pair<py::int_, py::int_>> out;
        for (const auto& c : cf.convergents(std::min(count, cf.conv_count())))
          out.emplace_back(to_py_int(c.num), to_py_int(c.den));
        return out;
      },
      py::arg("spec"), py::arg("count") = 16, "Convergents (p_l, q_l) starting at l = 0.");

  m.def(
      "generate",
      [](const std::string& seq, std::size_t n, std::uint64_t seed) {
        std::vector<py::int_> out;
        for (const auto& v : prefix_from(seq, n, seed).values) out.push_back(to_py_int(v));
        return out;
      },
      py::arg("seq"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "r2",
      [](const std::string& alpha, const std::string& seq, std::size_t n,
         const std::vector<std::string>& s_list, std::uint64_t seed) {
        auto prefix = prefix_from(seq, n, seed);
        auto points = points_from(alpha, prefix);
        std::vector<pc::Rat> ss;
        for (const auto& s : s_list) ss.push_back(pc::parse_rat(s));
        py::list out;
        for (const auto& st : pc::r2_curve(points, ss)) out.append(stat_dict(st));
        return out;
      },
      py::arg("alpha"), py::arg("seq"), py::arg("n"), py::arg("s_list"), py::arg("seed") = 0,
      "Pair correlation values R_N(s) for each threshold.");

  m.def(
      "r2_window",
      [](const std::string& alpha, const std::string& seq, std::size_t n, const std::string& s_lo,
         const std::string& s_hi, std::uint64_t seed) {
        auto prefix = prefix_from(seq, n, seed);
        auto points = points_from(alpha, prefix);
        auto w = pc::r2_window(points, pc::parse_rat(s_lo), pc::parse_rat(s_hi));
        py::dict d;
        d["N"] = w.n;
        d["pair_count"] = w.ordered_pairs;
        d["value"] = w.value();
        d["poisson_ref"] = w.poisson_ref();
        return d;
      },
      py::arg("alpha"), py::arg("seq"), py::arg("n"), py::arg("s_lo"), py::arg("s_hi"),
      py::arg("seed") = 0);

  m.def(
      "additive_energy",
      [](const std::string& seq, std::size_t n, std::uint64_t seed) {
        auto prefix = prefix_from(seq, n, seed);
        auto prof = pc::additive_energy(prefix);
        py::dict d;
        d["N"] = prof.n;
        d["energy"] = to_py_int(prof.energy);
        d["ratio"] = prof.ratio;
        return d;
      },
      py::arg("seq"), py::arg("n"), py::arg("seed") = 0,
      "E(A_N) with the dual-route exactness check.");

  m.def(
      "difference_profile",
      [](const std::string& seq, std::size_t n, std::uint64_t seed) {
        auto prefix = prefix_from(seq, n, seed);
        pc::EnergyOptions opts;
        opts.materialize_profile = true;
        auto prof = pc::difference_profile(prefix, opts);
        py::dict d;
        for (const auto& [v, cnt] : prof.diff_counts) d[py::str(v.str())] = cnt;
        return d;
      },
      py::arg("seq"), py::arg("n"), py::arg("seed") = 0, "A_N(v) for v > 0.");

  m.def(
      "gaps",
      [](const std::string& alpha, const py::int_& m_in) {
        auto spec = pc::AlphaSpec::parse(alpha);
        pc::BigInt m = from_py_int(m_in);
        auto cf = pc::ContinuedFraction::expand(spec, 64);
        auto fixed = pc::resolve_alpha(spec, pc::recommended_precision_bits(m, m));
        auto d = pc::decompose(fixed, cf, m);
        py::dict out;
        out["M"] = to_py_int(d.m);
        out["q"] = to_py_int(d.loc.q);
        out["a"] = to_py_int(d.loc.a);
        out["b"] = to_py_int(d.loc.b);
        out["l_even"] = d.loc.l_even;
        out["delta"] = pc::to_double(d.delta);
        out["distinct_neighbor_gaps"] = pc::neighbor_gap_values(d.points).size();
        std::vector<std::size_t> sizes;
        for (std::size_t p = 0; p < d.bundle_count(); ++p) sizes.push_back(d.bundle_size(p));
        out["bundle_sizes"] = sizes;
        return out;
      },
      py::arg("alpha"), py::arg("m"), "Bundle decomposition summary of {j alpha}, j <= M.");

  m.def("detect", &detect_py, py::arg("seq"), py::arg("n"), py::arg("c") = "1",
        py::arg("K") = "1", py::arg("k_max") = 64, py::arg("seed") = 0,
        "Degree-1 quasi-arithmetic certificate, or None.");

  m.def("witness", &witness_py, py::arg("seq"), py::arg("alpha"), py::arg("c") = "1",
        py::arg("K") = "1", py::arg("n_list") = std::vector<std::size_t>{1000},
        py::arg("margin") = 0.2, py::arg("k_max") = 64, py::arg("seed") = 0,
        "Non-Poissonian witness search across prefix lengths.");

  m.def(
      "experiment",
      [](const std::string& preset, std::size_t n, std::uint64_t seed, std::size_t instances) {
        pc::ExperimentParams params;
        params.n = n;
        params.seed = seed;
        params.instances = instances;
        auto res = pc::run_experiment(preset, params);
        py::dict d;
        d["header"] = res.header;
        d["rows"] = res.rows;
        d["summary"] = res.summary;
        d["ok"] = res.ok;
        return d;
      },
      py::arg("preset"), py::arg("n") = 10000, py::arg("seed") = 0, py::arg("instances") = 0);
}
