#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stagavg/algorithms.hpp"
#include "stagavg/problems.hpp"

namespace stagavg {

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<AlgorithmConfig> variants;
  std::uint64_t trials = 10;
  std::uint64_t seed = 0;
  unsigned k_max = 18;
  std::string output_path;
  /// Overrides w_0 with the constant vector (fill, ..., fill).
  std::optional<double> w0_fill;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct SummaryRow {
  Variant variant = Variant::staggered;
  std::uint64_t t = 0;
  double mean_gap = 0.0;
  double stderr_gap = 0.0;
  double mean_dist = 0.0;
};

/// Trial-averaged curves, sorted by (variant, t) with variants in
/// enumeration order.
struct Summary {
  std::vector<SummaryRow> rows;
  std::uint64_t trials = 0;
  /// Oracle calls consumed per trial, indexed like ExperimentConfig::variants.
  std::vector<std::uint64_t> oracle_calls_per_trial;

  std::vector<SummaryRow> rows_for(Variant v) const;
};

/// [2^k − 2 for k = 1..k_max]: one round before each block restart.
std::vector<std::uint64_t> sampling_schedule(unsigned k_max);

/// Stream id for (variant, trial). Depends on the variant kind, not on its
/// position in the config, so adding variants never changes other curves.
std::uint64_t trial_stream_id(Variant v, std::uint64_t trial) noexcept;

/// One AlgorithmConfig per name with horizon 2^k_max − 1.
std::vector<AlgorithmConfig> make_variants(const std::vector<std::string>& names, double alpha,
                                           double heuristic_c, std::uint64_t decay_eta,
                                           unsigned k_max);

/// Throws InvalidArgument when the config breaks an invariant.
void validate(const ExperimentConfig& cfg);

/// Runs every (variant, trial) pair and reduces in trial order, so the result
/// does not depend on scheduling. NumericFailure is rethrown with variant and
/// trial context.
Summary run_experiment(const ExperimentConfig& cfg);
Summary run_experiment(const Problem& p, const ExperimentConfig& cfg);

std::string to_csv(const Summary& s);
/// Header `variant,t,mean_gap,stderr_gap,mean_dist`, LF endings, 17
/// significant digits. Throws IoError.
void write_csv(const Summary& s, const std::string& path);

/// Writes a standalone Python/matplotlib script that draws mean_gap against t
/// on log-log axes, one curve per variant, into `<csv stem>.png`.
void emit_plot_script(const std::string& csv_path, const std::string& out_path);

}  // namespace stagavg
