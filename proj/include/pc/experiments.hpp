#pragma once

// Named experiment presets behind `pc experiment <name>`. Each run is
// deterministic given its parameters and reports plain tabular data.

#include <cstdint>
#include <string>
#include <vector>

namespace pc {

struct ExperimentParams {
  std::size_t n = 100000;        // scale knob (max N, or corpus M bound)
  std::uint64_t seed = 0;
  std::size_t instances = 0;     // 0 = preset default
  double margin = 0.2;
};

struct ExperimentResult {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string summary;
  bool ok = false;
};

// Presets: kronecker-null, density-corollary, poisson-control, lemma-suite,
// gap-audit.
ExperimentResult run_experiment(const std::string& preset, const ExperimentParams& params);

std::vector<std::string> experiment_names();

}  // namespace pc
