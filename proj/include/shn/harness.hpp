#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shn/binary_nets.hpp"
#include "shn/complex.hpp"
#include "shn/continuous_net.hpp"
#include "shn/patterns.hpp"

namespace shn {

/// Invalid or inconsistent run configuration, detected before any trial runs.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Experiment { BinaryOverlap, ContinuousRecall, HomologyCorrelation, EnergyGrid, CapacityReport };
std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view name);

enum class SyntheticKind { Hadamard, Binary01, Uniform };
std::string_view to_string(SyntheticKind k) noexcept;
SyntheticKind parse_synthetic_kind(std::string_view name);

struct DatasetSpec {
  std::string path;
  std::string format = "idx";
  std::size_t limit = 0;
  bool grayscale = false;
};

struct RunConfig {
  Experiment experiment = Experiment::BinaryOverlap;
  std::size_t n = 100;
  std::vector<Condition> conditions{Condition::K1};
  std::vector<std::size_t> loadings;      // absolute pattern counts
  std::vector<double> loading_fractions;  // fractions of N, used when `loadings` is empty
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out = "runs/out";

  // binary experiments
  std::string dynamics = "traditional";  // or "modern"
  std::string interaction = "polynomial:2";
  std::size_t max_steps = kDefaultMaxSteps;
  StopRule stop_rule = StopRule::Stationary;
  bool record_homology = false;

  // continuous experiments
  std::vector<SimilarityMeasure> measures{SimilarityMeasure::euclidean()};
  double inv_t = 100.0;
  double noise_variance = 0.5;
  std::size_t settle_max_steps = kSettleMaxSteps;
  double settle_tolerance = kSettleTolerance;
  std::size_t queries_per_trial = 0;  // 0 queries every stored pattern
  SyntheticKind synthetic = SyntheticKind::Hadamard;
  std::optional<DatasetSpec> dataset;

  // energy grid
  std::vector<double> inv_ts{1.0, 2.0, 10.0};
  std::size_t grid_size = 10;

  // capacity report
  std::vector<int> max_degrees{1, 2, 3};

  /// Parses and validates. Unknown keys, wrong types and bad values raise ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  /// Every field, resolved; from_json(to_json()) reproduces the config.
  nlohmann::json to_json() const;
  void validate() const;

  std::vector<std::size_t> resolved_loadings() const;
  Dynamics binary_dynamics() const;
};

struct TrialRow {
  std::size_t trial_id = 0;
  std::string condition;
  std::string measure;  // dynamics label for binary runs
  std::size_t P = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> query;  // stored pattern used as the cue (continuous)
  std::size_t best_index = 0;
  double best_value = 0.0;
  std::optional<bool> recalled;
  std::size_t steps = 0;
  std::string stop_reason;
  std::optional<std::size_t> beta0, beta1, beta2;
};

struct SummaryRow {
  std::string condition;
  std::string measure;
  std::size_t P = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::optional<double> pearson_r;  // homology correlation only; empty when undefined
  bool has_correlation = false;
};

struct RunResult {
  Experiment experiment = Experiment::BinaryOverlap;
  std::vector<TrialRow> rows;
  std::vector<SummaryRow> summary;
};

/// Per trial and loading: fresh diluted complex and random patterns, random
/// initial state, run to convergence, record the best overlap.
RunResult run_binary_overlap(const RunConfig& cfg);

/// Per trial, loading and query: corrupt a stored pattern, settle, score by MSE
/// and the recall threshold. Queries are shared across conditions and measures.
/// K1 skips the ced and cmd measures.
RunResult run_continuous_recall(const RunConfig& cfg);

/// Binary overlap runs plus Betti numbers of each closed complex; the summary
/// carries Pearson r between overlap and beta_1.
RunResult run_homology_correlation(const RunConfig& cfg);

/// Dispatches on cfg.experiment (binary, continuous or homology).
RunResult run_experiment(const RunConfig& cfg);

struct Pca2 {
  std::vector<double> mean;
  std::vector<double> pc1, pc2;  // unit vectors, largest component positive
  double explained_variance = 0.0;
  std::vector<double> eigenvalues;  // descending
};

/// Top two principal components of the rows. Throws std::invalid_argument for fewer than 3 rows.
Pca2 principal_components(const PatternSet& patterns);

struct EnergyGridResult {
  std::size_t grid_size = 0;
  std::vector<double> axis1, axis2;  // PC coordinates of the grid lines
  std::vector<double> inv_ts;
  std::vector<std::vector<double>> energies;  // [inv_t][iy * grid + ix]
  std::vector<std::pair<double, double>> pattern_coords;
  Pca2 pca;
};

EnergyGridResult run_energy_grid(const RunConfig& cfg);

/// Closed-form capacity estimates for cfg.n, each of cfg.max_degrees and each loading.
nlohmann::json capacity_report(const RunConfig& cfg);

std::string rows_csv(const RunResult& result);
std::string summary_csv(const RunResult& result);

/// rows.csv, summary.csv, config-echo.json and SVG plots.
void emit_outputs(const RunResult& result, const RunConfig& cfg, const std::filesystem::path& dir);
/// energy_grid.csv, pca.json, config-echo.json and one heatmap per inverse temperature.
void emit_energy_grid(const EnergyGridResult& grid, const RunConfig& cfg, const std::filesystem::path& dir);

}  // namespace shn
