// Batch CLI for fitting catastrophic-claim models, amplifying data by
// resampling or external synthetic samples, simulating the claim and
// risk-reserve processes, and exporting fuzzy opinions of the outcome.

#include "catrisk/errors.hpp"
#include "catrisk/experiment.hpp"
#include "catrisk/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

int exit_code_for(catrisk::errc code) {
    switch (code) {
    case catrisk::errc::missing_column:
    case catrisk::errc::unparseable_row:
    case catrisk::errc::empty_file:
    case catrisk::errc::io_error:
    case catrisk::errc::usage_error: return 2;
    default: return 1;
    }
}

void emit_error(const catrisk::error& e) {
    nlohmann::json j;
    j["error"] = {{"code", catrisk::errc_name(e.code())}, {"message", e.what()}};
    std::cout << j.dump() << std::endl;
}

std::vector<catrisk::severity_family> parse_families(const std::vector<std::string>& names) {
    std::vector<catrisk::severity_family> out;
    for (const auto& n : names) out.push_back(catrisk::family_from_name(n));
    return out;
}

std::vector<catrisk::intensity_family> parse_intensities(const std::vector<std::string>& names) {
    std::vector<catrisk::intensity_family> out;
    for (const auto& n : names) out.push_back(catrisk::intensity_from_name(n));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"catrisk — catastrophic-claim model fitting, resampling and risk simulation"};
    app.set_version_flag("--version", catrisk::version_string);
    app.require_subcommand(1);

    catrisk::experiment_config config;
    std::vector<std::string> family_names;
    std::vector<std::string> intensity_names;
    std::string method_name;
    int split_year = 0;
    double horizon = 0.0, ruin_horizon = 0.0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", config.input_path, "claims CSV (header row)");
        if (needs_input) in->required();
        cmd->add_option("--test-input", config.test_input_path, "separate test claims CSV");
        cmd->add_option("--split-year", split_year, "train/test boundary year")
            ->check(CLI::Range(1, 9999));
        cmd->add_option("--value-column", config.value_column, "claim value column name");
        cmd->add_option("--date-column", config.date_column, "ISO date column name");
        cmd->add_option("--epoch-start", config.epoch_start, "calendar year anchoring time 0");
        cmd->add_option("--trim-fraction", config.trim_fraction,
                        "fraction of highest claims to remove")
            ->check(CLI::Range(0.0, 0.999));
        cmd->add_option("--families", family_names, "severity families (comma separated)")
            ->delimiter(',');
        cmd->add_option("--intensities", intensity_names, "intensity families (comma separated)")
            ->delimiter(',');
        cmd->add_option("--method", method_name, "resampling method: bootstrap|bootknife");
        cmd->add_option("--B", config.resample_count, "secondary sample count")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--synth-manifest", config.synth_manifest,
                        "manifest listing synthetic batch CSVs");
        cmd->add_option("--trajectories", config.trajectories, "Monte Carlo trajectories")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--horizon", horizon, "simulation horizon in years");
        cmd->add_option("--ruin-horizon", ruin_horizon, "ruin horizon in years");
        cmd->add_option("--u", config.initial_reserve, "initial reserve")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--premium-rate", config.premium_rate, "premium rate per year")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--alpha-grid", config.alpha_grid, "alpha-cut grid size")
            ->check(CLI::Range(2, 100000));
        cmd->add_option("--out-dir", config.out_dir, "output directory");
        cmd->add_option("--seed", config.seed, "root RNG seed (required)")
            ->required()
            ->each([&](const std::string&) { seed_set = true; });
    };

    auto* fit = app.add_subcommand("fit", "fit severity and intensity models (all methods)");
    add_common(fit, true);
    auto* evaluate =
        app.add_subcommand("evaluate", "error matrix, ruin estimates and fuzzy opinions");
    add_common(evaluate, true);
    auto* resample = app.add_subcommand("resample", "mean-of-MLEs over resampled claim values");
    add_common(resample, true);
    auto* ruin = app.add_subcommand("ruin", "finite-horizon ruin probability");
    add_common(ruin, true);
    auto* fuzzy = app.add_subcommand("fuzzy", "fuzzy opinion of the claim process value");
    add_common(fuzzy, true);
    auto* synth = app.add_subcommand("synth-estimate",
                                     "mean estimators over external synthetic batches");
    add_common(synth, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!family_names.empty()) config.families = parse_families(family_names);
        if (!intensity_names.empty()) config.intensities = parse_intensities(intensity_names);
        if (!method_name.empty()) config.method = catrisk::method_from_name(method_name);
        if (split_year != 0) config.split_year = split_year;
        if (horizon != 0.0) config.horizon = horizon;
        if (ruin_horizon != 0.0) config.ruin_horizon = ruin_horizon;

        std::string report;
        if (*fit) report = catrisk::cmd_fit(config);
        if (*evaluate) report = catrisk::cmd_evaluate(config);
        if (*resample) report = catrisk::cmd_resample(config);
        if (*ruin) report = catrisk::cmd_ruin(config);
        if (*fuzzy) report = catrisk::cmd_fuzzy(config);
        if (*synth) report = catrisk::cmd_synth_estimate(config);
        std::cout << report << std::endl;
        return 0;
    } catch (const catrisk::error& e) {
        emit_error(e);
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["error"] = {{"code", "InternalError"}, {"message", e.what()}};
        std::cout << j.dump() << std::endl;
        return 1;
    }
}
