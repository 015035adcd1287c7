#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "looplie/json_io.hpp"

namespace looplie::verify {

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// 0 selects the suite's default count.
  int trials = 0;
  /// 0 mixes genus 1 and 2 where the suite supports it.
  int genus = 0;
  std::optional<liealg::GroupSpec> group;
  /// Overrides the suite's pass threshold.
  std::optional<double> tol;
  int parallel = 1;
};

struct TrialResult {
  int index = 0;
  bool pass = false;
  double residual = 0.0;
  io::Json record;  // one JSON-lines entry
};

struct SuiteReport {
  std::string suite;
  std::vector<TrialResult> trials;
  bool pass = true;
  double max_residual = 0.0;

  /// One line per trial in index order, then a summary line.
  std::string jsonl() const;
};

std::vector<std::string> suite_names();
bool has_suite(const std::string& name);
int default_trials(const std::string& name);

/// Runs the battery; trials are seeded independently, so `parallel` never
/// changes the report. Throws std::invalid_argument for unknown suites.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

/// Seeded cyclically reduced non-empty word with length in [min_len, max_len].
surface::Word random_word(int genus, std::mt19937_64& rng, int min_len, int max_len);

/// sample_representation with deterministic reseeding on SamplingFailure.
surface::Representation sample_rep(const liealg::GroupSpec& spec, int genus, std::uint64_t seed,
                                   int attempts = 8);

}  // namespace looplie::verify
