#pragma once

#include "catrisk/claims.hpp"
#include "catrisk/intensity.hpp"
#include "catrisk/resampling.hpp"
#include "catrisk/riskproc.hpp"
#include "catrisk/severity.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace catrisk {

// Batch-run configuration shared by all CLI subcommands. Paths referenced
// here must exist at run time; the seed is mandatory (there is no wall-clock
// fallback) so every run is reproducible.
struct experiment_config {
    std::string input_path;
    std::string test_input_path;           // alternative to split_year
    std::optional<int> split_year;
    std::string value_column = "value";
    std::string date_column = "date";
    int epoch_start = 1990;
    std::optional<int> test_epoch_start;   // defaults to split_year, else epoch_start
    double trim_fraction = 0.05;

    std::vector<severity_family> families{all_severity_families.begin(),
                                          all_severity_families.end()};
    std::vector<intensity_family> intensities{all_intensity_families.begin(),
                                              all_intensity_families.end()};

    std::optional<resample_method> method; // for the `resample` subcommand
    int resample_count = 500;              // B
    std::string synth_manifest;            // enables the synth method when set

    double initial_reserve = 0.0;          // u
    double premium_rate = 0.0;             // p per year
    std::optional<double> horizon;         // simulation T; defaults to the test horizon
    std::optional<double> ruin_horizon;    // defaults to the simulation horizon
    int trajectories = 1000;
    int alpha_grid = 101;

    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

struct fitted_severity {
    severity_model model;
    int attempted = 1;
    int failed = 0;
};

// Every fitted model of one experiment, keyed by method label
// ("none", "bootstrap", "bootknife", "synth"). Bootstrap and bootknife
// intensity entries alias the no-resampling fit: event times are never
// resampled, so those methods share one intensity column.
struct fit_results {
    std::map<std::string, std::map<std::string, fitted_severity>> severity;
    std::map<std::string, std::map<std::string, intensity_model>> intensity;
    std::vector<std::string> method_labels;
    std::vector<std::string> warnings;
};

struct loaded_data {
    claim_dataset train;
    std::optional<claim_dataset> test;
};

// Parse, trim, and (when split_year is set) split the configured inputs.
loaded_data load_datasets(const experiment_config& config);

fit_results fit_all_models(const claim_dataset& train,
                           const std::vector<synthetic_batch>& batches,
                           const experiment_config& config);

// Subcommand drivers. Each writes report.json (and sibling artifacts) under
// config.out_dir and returns the report path.
std::string cmd_fit(const experiment_config& config);
std::string cmd_evaluate(const experiment_config& config);
std::string cmd_resample(const experiment_config& config);
std::string cmd_ruin(const experiment_config& config);
std::string cmd_fuzzy(const experiment_config& config);
std::string cmd_synth_estimate(const experiment_config& config);

} // namespace catrisk
