#pragma once

// Generators and file ingestion for the integer sequences (a_n) under study.
// Sequences are materialized as explicit prefixes: every statistic downstream
// is a prefix statistic at some scale N.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pc/bigint.hpp"

namespace pc {

struct SequencePrefix {
  std::vector<BigInt> values;  // distinct positive integers
  bool sorted_increasing = false;
  std::string label;

  std::size_t size() const { return values.size(); }
  const BigInt& max_value() const;
};

// Generator grammar (CLI): `id`, `ap:h,k`, `squares`, `lac:2`,
// `density:0.5[:seed=7]`, `aps:h1,k1+h2,k2`, `file:path`.
struct GeneratorSpec {
  enum class Kind { identity, arithmetic, squares, lacunary, density, ap_union, file };

  Kind kind = Kind::identity;
  BigInt h, k;                                   // arithmetic
  BigInt base = 2;                               // lacunary
  Rat rho;                                       // density
  std::optional<std::uint64_t> seed_override;    // density:...:seed=s
  std::vector<std::pair<BigInt, BigInt>> aps;    // ap_union, (h_i, k_i)
  std::filesystem::path path;                    // file

  static GeneratorSpec parse(std::string_view text);
  std::string to_string() const;
};

struct GenerateOptions {
  unsigned bit_budget = 4096;  // cap on lacunary value size
};

// Deterministic for fixed (spec, n, seed). The seed feeds only the random
// kinds; a seed embedded in the spec string overrides the argument.
SequencePrefix generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed,
                        const GenerateOptions& opts = {});

// One base-10 integer per line; `#` starts a comment line. Distinctness is
// verified; violations report the offending line number.
SequencePrefix load_sequence(const std::filesystem::path& path);

}  // namespace pc
