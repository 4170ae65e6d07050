#include "pc/sequences.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "pc/errors.hpp"

namespace pc {

const BigInt& SequencePrefix::max_value() const {
  if (values.empty()) fail(Errc::bad_spec, "empty sequence prefix");
  if (sorted_increasing) return values.back();
  return *std::max_element(values.begin(), values.end());
}

namespace {

std::vector<std::string> split_str(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  GeneratorSpec g;
  if (text == "id") {
    g.kind = Kind::identity;
    return g;
  }
  if (text == "squares") {
    g.kind = Kind::squares;
    return g;
  }
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    fail(Errc::parse_error, "unknown sequence spec '" + std::string(text) + "'");
  auto kind = text.substr(0, colon);
  auto body = text.substr(colon + 1);
  if (kind == "ap") {
    auto parts = split_str(body, ',');
    if (parts.size() != 2) fail(Errc::parse_error, "ap spec wants h,k");
    g.kind = Kind::arithmetic;
    g.h = parse_bigint(parts[0]);
    g.k = parse_bigint(parts[1]);
    if (g.h < 0 || g.k < 1) fail(Errc::parse_error, "ap spec wants h >= 0, k >= 1");
    return g;
  }
  if (kind == "lac") {
    g.kind = Kind::lacunary;
    g.base = parse_bigint(body);
    if (g.base < 2) fail(Errc::parse_error, "lacunary base must be >= 2");
    return g;
  }
  if (kind == "density") {
    auto parts = split_str(body, ':');
    g.kind = Kind::density;
    g.rho = parse_rat(parts[0]);
    if (g.rho <= 0 || g.rho >= 1) fail(Errc::parse_error, "density rho must be in (0,1)");
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].rfind("seed=", 0) == 0)
        g.seed_override = to_u64(parse_bigint(parts[i].substr(5)));
      else
        fail(Errc::parse_error, "unknown density option '" + parts[i] + "'");
    }
    return g;
  }
  if (kind == "aps") {
    g.kind = Kind::ap_union;
    for (const auto& item : split_str(body, '+')) {
      auto hv = split_str(item, ',');
      if (hv.size() != 2) fail(Errc::parse_error, "aps spec wants h1,k1+h2,k2+...");
      BigInt h = parse_bigint(hv[0]), k = parse_bigint(hv[1]);
      if (h < 0 || k < 1) fail(Errc::parse_error, "aps spec wants h >= 0, k >= 1");
      g.aps.emplace_back(std::move(h), std::move(k));
    }
    if (g.aps.empty()) fail(Errc::parse_error, "aps spec needs at least one progression");
    return g;
  }
  if (kind == "file") {
    g.kind = Kind::file;
    g.path = std::string(body);
    return g;
  }
  fail(Errc::parse_error, "unknown sequence kind '" + std::string(kind) + "'");
}

std::string GeneratorSpec::to_string() const {
  switch (kind) {
    case Kind::identity: return "id";
    case Kind::squares: return "squares";
    case Kind::arithmetic: return "ap:" + h.str() + "," + k.str();
    case Kind::lacunary: return "lac:" + base.str();
    case Kind::density: {
      std::string out = "density:" + rat_string(rho);
      if (seed_override) out += ":seed=" + std::to_string(*seed_override);
      return out;
    }
    case Kind::ap_union: {
      std::string out = "aps:";
      for (std::size_t i = 0; i < aps.size(); ++i) {
        if (i) out += "+";
        out += aps[i].first.str() + "," + aps[i].second.str();
      }
      return out;
    }
    case Kind::file: return "file:" + path.string();
  }
  return "?";
}

SequencePrefix generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed,
                        const GenerateOptions& opts) {
  if (n < 1) fail(Errc::bad_spec, "N must be >= 1");
  SequencePrefix out;
  out.values.reserve(n);
  out.sorted_increasing = true;
  out.label = spec.to_string();

  switch (spec.kind) {
    case GeneratorSpec::Kind::identity:
      for (std::size_t i = 1; i <= n; ++i) out.values.emplace_back(i);
      return out;

    case GeneratorSpec::Kind::arithmetic: {
      // a_n = h + (n-1)k; h == 0 starts at k to keep values positive.
      BigInt first = spec.h.is_zero() ? spec.k : spec.h;
      for (std::size_t i = 0; i < n; ++i) out.values.push_back(first + BigInt(i) * spec.k);
      return out;
    }

    case GeneratorSpec::Kind::squares:
      for (std::size_t i = 1; i <= n; ++i) out.values.push_back(BigInt(i) * BigInt(i));
      return out;

    case GeneratorSpec::Kind::lacunary: {
      if (n * bit_length(spec.base) > opts.bit_budget)
        fail(Errc::bit_budget_exceeded,
             "lacunary prefix of length " + std::to_string(n) + " exceeds the " +
                 std::to_string(opts.bit_budget) + "-bit budget");
      BigInt v = 1;
      for (std::size_t i = 1; i <= n; ++i) {
        v *= spec.base;
        out.values.push_back(v);
      }
      return out;
    }

    case GeneratorSpec::Kind::density: {
      // keep each integer independently with probability rho; raw 64-bit
      // draws against an exact threshold keep the stream portable
      std::mt19937_64 rng(spec.seed_override.value_or(seed));
      BigInt thresh_big = floor_rat(spec.rho * Rat(pow2(64)));
      std::uint64_t thresh = to_u64(thresh_big);
      BigInt m = 0;
      while (out.values.size() < n) {
        ++m;
        if (rng() < thresh) out.values.push_back(m);
      }
      return out;
    }

    case GeneratorSpec::Kind::ap_union: {
      // ascending merge of h + j*k (j >= h==0 ? 1 : 0), deduplicated
      using Node = std::pair<BigInt, std::size_t>;
      auto cmp = [](const Node& a, const Node& b) { return a.first > b.first; };
      std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
      std::vector<BigInt> cursor(spec.aps.size());
      for (std::size_t i = 0; i < spec.aps.size(); ++i) {
        const auto& [h, k] = spec.aps[i];
        cursor[i] = h.is_zero() ? k : h;
        heap.emplace(cursor[i], i);
      }
      while (out.values.size() < n) {
        auto [v, i] = heap.top();
        heap.pop();
        if (out.values.empty() || out.values.back() != v) out.values.push_back(v);
        cursor[i] += spec.aps[i].second;
        heap.emplace(cursor[i], i);
      }
      return out;
    }

    case GeneratorSpec::Kind::file:
      return load_sequence(spec.path);
  }
  fail(Errc::bad_spec, "unreachable generator kind");
}

SequencePrefix load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::bad_spec, "cannot open sequence file " + path.string());
  SequencePrefix out;
  out.label = "file:" + path.string();
  std::set<BigInt> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string token = line.substr(b, e - b + 1);
    BigInt v;
    try {
      v = parse_bigint(token);
    } catch (const Error&) {
      fail(Errc::parse_error, "line " + std::to_string(lineno) + ": bad integer '" + token + "'");
    }
    if (v < 1) fail(Errc::parse_error, "line " + std::to_string(lineno) + ": values must be positive");
    if (!seen.insert(v).second)
      fail(Errc::duplicate_value, "line " + std::to_string(lineno) + ": duplicate value " + v.str());
    out.values.push_back(std::move(v));
  }
  if (out.values.empty()) fail(Errc::bad_spec, "sequence file " + path.string() + " is empty");
  out.sorted_increasing = std::is_sorted(out.values.begin(), out.values.end(),
                                         [](const BigInt& a, const BigInt& b) { return a < b; });
  return out;
}

}  // namespace pc
