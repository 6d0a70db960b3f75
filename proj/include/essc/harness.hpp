#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "essc/baselines.hpp"
#include "essc/datagen.hpp"
#include "essc/essc.hpp"

namespace essc {

enum class Method { Essc, KMeans, Sc1, Sc2, Demeaned, Sign, Oracle };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// All implemented methods, in report order.
const std::vector<Method>& all_methods();

struct ExperimentConfig {
  int model = 0;                          // preset id 1..5; 0 means inline spec
  std::optional<MixtureSpec> inline_spec; // used when model == 0
  std::vector<int> grid;                  // sweep values (ignored for inline)
  int reps = 100;
  std::vector<Method> methods;
  std::uint64_t seed = 0;
  KMeansConfig kmeans;
  std::optional<ThresholdSchedule> thresholds;
  std::string config_echo;                // raw config text, copied into reports

  void validate() const;
};

struct CellSummary {
  Method method = Method::Essc;
  int grid_value = 0;
  double mean = 0.0;
  std::optional<double> stderr_;  // absent when fewer than 2 successes
  int count = 0;                  // successful replicates
  int failures = 0;
  std::vector<double> rates;      // per successful replicate, replicate order
};

struct SimulationReport {
  nlohmann::json body;     // deterministic: identical config+seed -> identical body
  std::string text_table;  // aligned "mean(stderr)" cells
  std::string raw_csv;     // one row per (grid value, method, replicate)
  std::vector<CellSummary> cells;
};

/// Run every method on the same sampled dataset for each (grid value,
/// replicate) pair; replicate r of grid index g draws from the child seed
/// (seed, g, r). Method failures are counted per cell, never fatal.
SimulationReport run_simulation(const ExperimentConfig& cfg);

/// Monte Carlo checks of the concentration statements. `kind` is one of
/// RATIO_MULT, RATIO_GAP, FLATNESS, EXACT_RECOVERY, LOWER_BOUND, TSOLVER,
/// FLUCTUATION; params carries n, p, reps, seed plus regime-specific knobs
/// (all optional with documented defaults). Returns a JSON report with the
/// empirical frequencies and summary statistics.
nlohmann::json verify_theory(const std::string& kind, const nlohmann::json& params);

struct ClusterCsvOptions {
  Method method = Method::Essc;
  std::optional<int> screen_keep;
  std::uint64_t seed = 0;
  std::optional<ThresholdSchedule> thresholds;
  std::optional<int> subsample_target;  // Bernoulli(m/n) row retention
  KMeansConfig kmeans;
};

struct ClusterCsvResult {
  std::vector<int> assignment;
  nlohmann::json diagnostics;  // branch, t1, t2, fstat, thresholds, ...
};

/// Cluster a CSV file (samples as rows, header row, optional trailing `label`
/// column in {0,1}). Optional KS screening to screen_keep features first.
/// When out_dir is non-empty, writes assignment.csv and diagnostics.json there.
ClusterCsvResult cluster_csv(const std::string& input_path,
                             const ClusterCsvOptions& opts,
                             const std::string& out_dir = "");

/// Parse the plain-text key-value mixture config format (see README).
MixtureSpec parse_spec_file(const std::string& path, std::string* raw_text = nullptr);

/// Build identifier embedded in every report.
std::string version_string();

}  // namespace essc
