#include "catrisk/experiment.hpp"

#include "catrisk/errors.hpp"
#include "catrisk/fuzzy.hpp"
#include "catrisk/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace catrisk {

namespace {

using nlohmann::json;

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json meta_section(const experiment_config& config) {
    return {{"timestamp", timestamp_utc()},
            {"library_version", version_string},
            {"seed", config.seed}};
}

json units_section() {
    return {{"monetary", "thousands"},
            {"time", "years"},
            {"mse_scale", 1e16},
            {"mae_scale", 1e8}};
}

json config_section(const experiment_config& c) {
    json j;
    j["input"] = c.input_path;
    if (!c.test_input_path.empty()) j["test_input"] = c.test_input_path;
    if (c.split_year) j["split_year"] = *c.split_year;
    j["value_column"] = c.value_column;
    j["date_column"] = c.date_column;
    j["epoch_start"] = c.epoch_start;
    j["trim_fraction"] = c.trim_fraction;
    json fams = json::array();
    for (auto f : c.families) fams.push_back(std::string(family_name(f)));
    j["families"] = std::move(fams);
    json ints = json::array();
    for (auto f : c.intensities) ints.push_back(std::string(family_name(f)));
    j["intensities"] = std::move(ints);
    if (c.method) j["method"] = std::string(method_name(*c.method));
    j["resample_count"] = c.resample_count;
    if (!c.synth_manifest.empty()) j["synth_manifest"] = c.synth_manifest;
    j["initial_reserve"] = c.initial_reserve;
    j["premium_rate"] = c.premium_rate;
    if (c.horizon) j["horizon"] = *c.horizon;
    if (c.ruin_horizon) j["ruin_horizon"] = *c.ruin_horizon;
    j["trajectories"] = c.trajectories;
    j["alpha_grid"] = c.alpha_grid;
    j["seed"] = c.seed;
    return j;
}

json params_json(const severity_model& m) {
    return json::parse(to_json(m))["params"];
}

json params_json(const intensity_model& m) {
    return json::parse(to_json(m))["params"];
}

std::string write_report(const experiment_config& config, json&& body) {
    std::filesystem::create_directories(config.out_dir);
    const auto path = (std::filesystem::path(config.out_dir) / "report.json").string();
    std::ofstream out(path);
    if (!out) raise(errc::io_error, "cannot write report: " + path);
    out << body.dump(2) << '\n';
    return path;
}

std::uint64_t stream_seed(const experiment_config& config, std::string_view name) {
    return rng_stream(config.seed).derive(name).key();
}

std::vector<synthetic_batch> maybe_load_batches(const experiment_config& config) {
    if (config.synth_manifest.empty()) return {};
    return load_synthetic_batches(config.synth_manifest);
}

std::string pair_label(severity_family sev, intensity_family inten) {
    return std::string(family_name(sev)) + "/" + std::string(family_name(inten));
}

void note_negative_intensity(const intensity_model& m, std::vector<std::string>& warnings,
                             const std::string& context) {
    if (m.has_negative_intensity())
        warnings.push_back(context +
                           ": fitted sinusoidal intensity dips below zero; "
                           "simulation clamps it at zero");
}

} // namespace

loaded_data load_datasets(const experiment_config& config) {
    if (config.input_path.empty()) raise(errc::usage_error, "--input is required");
    auto raw = parse_claims_csv(config.input_path, config.value_column, config.date_column,
                                config.epoch_start);
    auto cleaned = preprocess(raw, config.trim_fraction);

    loaded_data data;
    if (config.split_year) {
        auto [train, test] = split_train_test(cleaned, *config.split_year);
        data.train = std::move(train);
        data.test = std::move(test);
    } else {
        data.train = std::move(cleaned);
    }
    if (!config.test_input_path.empty()) {
        const int test_epoch = config.test_epoch_start.value_or(
            config.split_year.value_or(config.epoch_start));
        auto test_raw = parse_claims_csv(config.test_input_path, config.value_column,
                                         config.date_column, test_epoch);
        data.test = preprocess(test_raw, config.trim_fraction);
    }
    return data;
}

fit_results fit_all_models(const claim_dataset& train,
                           const std::vector<synthetic_batch>& batches,
                           const experiment_config& config) {
    fit_results results;
    results.method_labels = {"none", "bootstrap", "bootknife"};
    if (!batches.empty()) results.method_labels.push_back("synth");

    const auto values = train.values();
    const auto times = train.times();

    for (auto family : config.families) {
        const std::string fam(family_name(family));
        auto& column = results.severity[fam];
        column["none"] = {fit_mle(family, values), 1, 0};
        for (auto method : {resample_method::bootstrap, resample_method::bootknife}) {
            const std::string label(method_name(method));
            resample_spec spec{method, config.resample_count,
                               stream_seed(config, "fit/" + label + "/" + fam)};
            const auto agg = aggregate_mle(values, family, spec);
            column[label] = {agg.model, agg.attempted, agg.failed};
        }
    }

    for (auto inten : config.intensities) {
        const std::string name(family_name(inten));
        auto& column = results.intensity[name];
        auto fitted = fit_intensity(times, inten);
        note_negative_intensity(fitted, results.warnings, name + "/none");
        // Occurrence times are never resampled, so bootstrap and bootknife
        // reuse the no-resampling intensity.
        column["none"] = fitted;
        column["bootstrap"] = fitted;
        column["bootknife"] = fitted;
    }

    if (!batches.empty()) {
        for (auto family : config.families) {
            const auto est = synth_estimate(batches, family, config.intensities.front());
            results.severity[std::string(family_name(family))]["synth"] = {
                est.severity, est.attempted, est.failed};
        }
        for (auto inten : config.intensities) {
            const auto est = synth_estimate(batches, config.families.front(), inten);
            const std::string name(family_name(inten));
            note_negative_intensity(est.intensity, results.warnings, name + "/synth");
            results.intensity[name]["synth"] = est.intensity;
        }
    }
    return results;
}

namespace {

json fit_section(const fit_results& fits) {
    json severity;
    for (const auto& [fam, column] : fits.severity) {
        json methods;
        for (const auto& [label, fitted] : column) {
            json cell;
            cell["params"] = params_json(fitted.model);
            if (fitted.attempted > 1) {
                cell["replicates"] = fitted.attempted;
                cell["failed_fits"] = fitted.failed;
            }
            methods[label] = std::move(cell);
        }
        severity[fam] = std::move(methods);
    }
    json intensity;
    for (const auto& [fam, column] : fits.intensity) {
        json methods;
        for (const auto& [label, model] : column) methods[label] = params_json(model);
        intensity[fam] = std::move(methods);
    }
    return {{"severity", std::move(severity)}, {"intensity", std::move(intensity)}};
}

} // namespace

std::string cmd_fit(const experiment_config& config) {
    const auto data = load_datasets(config);
    const auto batches = maybe_load_batches(config);
    const auto fits = fit_all_models(data.train, batches, config);

    json j;
    j["schema_version"] = 1;
    j["kind"] = "fit";
    j["meta"] = meta_section(config);
    j["config"] = config_section(config);
    j["units"] = units_section();
    j["train_size"] = data.train.size();
    j["train_horizon_years"] = data.train.horizon;
    j["models"] = fit_section(fits);
    j["warnings"] = fits.warnings;
    return write_report(config, std::move(j));
}

std::string cmd_evaluate(const experiment_config& config) {
    const auto data = load_datasets(config);
    if (!data.test)
        raise(errc::usage_error, "evaluate needs --split-year or --test-input");
    const auto batches = maybe_load_batches(config);
    const auto fits = fit_all_models(data.train, batches, config);

    const double horizon = config.horizon.value_or(data.test->horizon);
    if (!(horizon > 0.0)) raise(errc::domain_error, "evaluation horizon must be positive");
    const double realized = data.test->aggregate_value(horizon);
    const double ruin_horizon = config.ruin_horizon.value_or(horizon);

    std::filesystem::create_directories(config.out_dir);
    std::vector<std::string> warnings = fits.warnings;

    json cells;
    std::ostringstream csv;
    csv.precision(17);
    csv << "model";
    for (const auto& label : fits.method_labels)
        csv << ',' << label << "_mse_1e16," << label << "_mae_1e8";
    csv << '\n';

    for (auto sev : config.families) {
        for (auto inten : config.intensities) {
            const std::string label = pair_label(sev, inten);
            csv << label;
            json per_method;
            for (const auto& method : fits.method_labels) {
                const auto& sev_model = fits.severity.at(std::string(family_name(sev))).at(method);
                const auto& int_model = fits.intensity.at(std::string(family_name(inten))).at(method);

                const std::string stream_name =
                    "simulate/" + label + "/" + method;
                const auto summary =
                    simulate_claim_process(sev_model.model, int_model, horizon,
                                           config.trajectories, stream_seed(config, stream_name));
                const auto errs = error_metrics(realized, summary);

                risk_config rc{config.initial_reserve, config.premium_rate, ruin_horizon,
                               config.trajectories,
                               stream_seed(config, "ruin/" + label + "/" + method)};
                const auto ruin = ruin_probability(sev_model.model, int_model, rc);

                const auto fn = empirical_fuzzy_number::from_sample(summary.s_t_values,
                                                                    config.alpha_grid);
                std::string fuzzy_name = "fuzzy_" + std::string(family_name(sev)) + "_" +
                                         std::string(family_name(inten)) + "_" + method + ".csv";
                std::ofstream fuzzy_out(std::filesystem::path(config.out_dir) / fuzzy_name);
                fn.write_csv(fuzzy_out);

                json cell;
                cell["mse"] = errs.mse;
                cell["mae"] = errs.mae;
                cell["mse_1e16"] = errs.mse / 1e16;
                cell["mae_1e8"] = errs.mae / 1e8;
                cell["ruin"] = {{"probability", ruin.probability},
                                {"std_error", ruin.std_error},
                                {"horizon_years", ruin_horizon},
                                {"initial_reserve", config.initial_reserve},
                                {"premium_rate", config.premium_rate}};
                cell["fuzzy_csv"] = fuzzy_name;
                per_method[method] = std::move(cell);

                csv << ',' << errs.mse / 1e16 << ',' << errs.mae / 1e8;
            }
            cells[label] = std::move(per_method);
            csv << '\n';
        }
    }

    const auto errors_path = std::filesystem::path(config.out_dir) / "errors.csv";
    std::ofstream errors_out(errors_path);
    if (!errors_out) raise(errc::io_error, "cannot write " + errors_path.string());
    errors_out << csv.str();

    warnings.push_back("initial_reserve and premium_rate are interpreted in the dataset's "
                       "claim units (thousands) per year; cross-check against the data source");

    json j;
    j["schema_version"] = 1;
    j["kind"] = "evaluate";
    j["meta"] = meta_section(config);
    j["config"] = config_section(config);
    j["units"] = units_section();
    j["train_size"] = data.train.size();
    j["test_size"] = data.test->size();
    j["horizon_years"] = horizon;
    j["realized_s_t"] = realized;
    j["models"] = fit_section(fits);
    j["errors"] = std::move(cells);
    j["errors_csv"] = "errors.csv";
    j["warnings"] = warnings;
    return write_report(config, std::move(j));
}

std::string cmd_resample(const experiment_config& config) {
    if (!config.method) raise(errc::usage_error, "resample needs --method bootstrap|bootknife");
    const auto data = load_datasets(config);
    const auto values = data.train.values();

    json models;
    for (auto family : config.families) {
        const std::string fam(family_name(family));
        resample_spec spec{*config.method, config.resample_count,
                           stream_seed(config, "fit/" + std::string(method_name(*config.method)) +
                                                   "/" + fam)};
        const auto agg = aggregate_mle(values, family, spec);
        models[fam] = {{"params", params_json(agg.model)},
                       {"replicates", agg.attempted},
                       {"failed_fits", agg.failed}};
    }

    json j;
    j["schema_version"] = 1;
    j["kind"] = "resample";
    j["meta"] = meta_section(config);
    j["config"] = config_section(config);
    j["units"] = units_section();
    j["method"] = std::string(method_name(*config.method));
    j["models"] = std::move(models);
    return write_report(config, std::move(j));
}

std::string cmd_ruin(const experiment_config& config) {
    const auto data = load_datasets(config);
    const auto values = data.train.values();
    const auto times = data.train.times();

    const auto sev = fit_mle(config.families.front(), values);
    const auto inten = fit_intensity(times, config.intensities.front());
    std::vector<std::string> warnings;
    note_negative_intensity(inten, warnings, std::string(family_name(inten.family)));

    const double horizon = config.ruin_horizon.value_or(config.horizon.value_or(data.train.horizon));
    risk_config rc{config.initial_reserve, config.premium_rate, horizon, config.trajectories,
                   stream_seed(config, "ruin/" + pair_label(sev.family, inten.family) + "/none")};
    const auto est = ruin_probability(sev, inten, rc);

    json j;
    j["schema_version"] = 1;
    j["kind"] = "ruin";
    j["meta"] = meta_section(config);
    j["config"] = config_section(config);
    j["units"] = units_section();
    j["model"] = {{"severity", json::parse(to_json(sev))},
                  {"intensity", json::parse(to_json(inten))}};
    j["ruin"] = {{"probability", est.probability},
                 {"std_error", est.std_error},
                 {"trajectories", est.trajectories},
                 {"horizon_years", horizon},
                 {"initial_reserve", config.initial_reserve},
                 {"premium_rate", config.premium_rate}};
    j["warnings"] = warnings;
    return write_report(config, std::move(j));
}

std::string cmd_fuzzy(const experiment_config& config) {
    const auto data = load_datasets(config);
    const auto sev = fit_mle(config.families.front(), data.train.values());
    const auto inten = fit_intensity(data.train.times(), config.intensities.front());

    const double horizon = config.horizon.value_or(1.0);
    const std::string label = pair_label(sev.family, inten.family);
    const auto summary = simulate_claim_process(
        sev, inten, horizon, config.trajectories,
        stream_seed(config, "simulate/" + label + "/none"));
    const auto fn = empirical_fuzzy_number::from_sample(summary.s_t_values, config.alpha_grid);

    std::filesystem::create_directories(config.out_dir);
    const std::string fuzzy_name = "fuzzy_" + std::string(family_name(sev.family)) + "_" +
                                   std::string(family_name(inten.family)) + "_none.csv";
    std::ofstream fuzzy_out(std::filesystem::path(config.out_dir) / fuzzy_name);
    fn.write_csv(fuzzy_out);

    json j;
    j["schema_version"] = 1;
    j["kind"] = "fuzzy";
    j["meta"] = meta_section(config);
    j["config"] = config_section(config);
    j["units"] = units_section();
    j["model"] = {{"severity", json::parse(to_json(sev))},
                  {"intensity", json::parse(to_json(inten))}};
    j["horizon_years"] = horizon;
    j["fuzzy_csv"] = fuzzy_name;
    j["fuzzy"] = json::parse(fn.to_json());
    return write_report(config, std::move(j));
}

std::string cmd_synth_estimate(const experiment_config& config) {
    if (config.synth_manifest.empty())
        raise(errc::usage_error, "synth-estimate needs --synth-manifest");
    const auto batches = load_synthetic_batches(config.synth_manifest);

    json severity, intensity;
    std::vector<std::string> warnings;
    for (auto family : config.families) {
        const auto est = synth_estimate(batches, family, config.intensities.front());
        severity[std::string(family_name(family))] = {{"params", params_json(est.severity)},
                                                      {"batches", est.attempted},
                                                      {"failed_fits", est.failed}};
    }
    for (auto inten : config.intensities) {
        const auto est = synth_estimate(batches, config.families.front(), inten);
        const std::string name(family_name(inten));
        note_negative_intensity(est.intensity, warnings, name + "/synth");
        intensity[name] = {{"params", params_json(est.intensity)},
                           {"batches", est.attempted},
                           {"failed_fits", est.failed}};
    }

    json j;
    j["schema_version"] = 1;
    j["kind"] = "synth-estimate";
    j["meta"] = meta_section(config);
    j["config"] = config_section(config);
    j["units"] = units_section();
    j["models"] = {{"severity", std::move(severity)}, {"intensity", std::move(intensity)}};
    j["warnings"] = warnings;
    return write_report(config, std::move(j));
}

} // namespace catrisk
