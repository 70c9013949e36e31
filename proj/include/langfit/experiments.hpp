#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "langfit/config.hpp"
#include "langfit/contrast.hpp"
#include "langfit/forecast.hpp"
#include "langfit/narma.hpp"
#include "langfit/sde.hpp"

namespace langfit {

// Dataset generation under the seed policy: dataset i of a run uses
// derive_seed(config.sim.seed, i), so parallel and serial runs agree.
ObservationSeries generate_dataset(const ExperimentConfig& config, std::uint64_t seed);

// Every k-th observation; obs at spacing h becomes spacing k*h.
ObservationSeries subsample(const ObservationSeries& obs, int factor);

struct TableEntry {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;
  double ref = std::numeric_limits<double>::quiet_NaN();  // analytic value when one exists
};

// Per-parameter mean and standard deviation across replicate datasets.
struct ReplicateReport {
  std::vector<TableEntry> entries;
  int n_datasets = 0;
  int excluded = 0;
  std::string config_echo;
};

ReplicateReport replicate_estimators(const ExperimentConfig& config, int workers);

// Mean/std per parameter at several observation spacings, fitted on shared
// datasets (each dataset is simulated once and subsampled per h).
struct SpacingTable {
  std::vector<double> h_values;
  std::vector<std::vector<TableEntry>> per_h;  // aligned with h_values
  int n_datasets = 0;
  int excluded = 0;
};

std::string spacing_table_csv(const SpacingTable& table);

SpacingTable reproduce_table1(const ExperimentConfig& base, int workers);  // linear CT
SpacingTable reproduce_table2(const ExperimentConfig& base, int workers);  // ARMA(2,1) vs T-values
SpacingTable reproduce_table3(const ExperimentConfig& base, int workers);  // Kramers CT
SpacingTable reproduce_table4(const ExperimentConfig& base, int workers);  // Kramers M3 q=0

// Coefficient table across data-length fractions plus the relative
// oscillation max_f |theta_f - theta_full| / |theta_full|.
struct ConsistencyReport {
  std::vector<double> fractions;
  struct Row {
    std::string spec;
    std::string coef;
    std::vector<double> values;  // aligned with fractions; NaN when the cell failed
    double oscillation = 0.0;
    bool failed = false;
  };
  std::vector<Row> rows;
};

ConsistencyReport consistency_scan(const ObservationSeries& obs, const std::vector<NarmaSpec>& specs,
                                   const std::vector<double>& fractions,
                                   const NarmaFitOptions& options = {});
std::string consistency_csv(const ConsistencyReport& report);

ConsistencyReport reproduce_table5(const ExperimentConfig& base, int workers);

// Full two-pipeline forecast benchmark: fit both models on the first half,
// benchmark true-SDE / estimated-SDE / NARMA ensembles on second-half pieces.
struct ForecastBenchmark {
  std::vector<std::string> names;  // true_sde, est_sde, narma
  std::vector<RmseCurve> curves;
  ContrastFit ct_fit;
  NarmaFit narma_fit;
};

ForecastBenchmark run_forecast_pipeline(const ExperimentConfig& config, int workers);

// CLI subcommand drivers; all outputs under out_dir, plus manifest.txt.
struct RunContext {
  ExperimentConfig config;
  std::string out_dir = ".";
  int workers = 1;
  std::string data_path;  // optional observations CSV input
};

void write_manifest(const RunContext& ctx);
void run_simulate(const RunContext& ctx);
void run_estimate_ct(const RunContext& ctx);
void run_fit_narma(const RunContext& ctx);
void run_forecast(const RunContext& ctx);
void run_stats(const RunContext& ctx);
void run_replicate(const RunContext& ctx);
void run_consistency(const RunContext& ctx);
void run_reproduce(const RunContext& ctx, const std::string& target);

}  // namespace langfit
