#include "catrisk/resampling.hpp"

#include "catrisk/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace catrisk {

std::string_view method_name(resample_method m) {
    return m == resample_method::bootstrap ? "bootstrap" : "bootknife";
}

resample_method method_from_name(std::string_view name) {
    if (name == "bootstrap") return resample_method::bootstrap;
    if (name == "bootknife") return resample_method::bootknife;
    raise(errc::usage_error, "unknown resampling method: " + std::string(name));
}

std::vector<double> resample_once(std::span<const double> sample, resample_method method,
                                  rng_stream& rng) {
    const std::size_t n = sample.size();
    if (method == resample_method::bootstrap && n < 1)
        raise(errc::sample_too_small, "bootstrap needs a non-empty sample");
    if (method == resample_method::bootknife && n < 2)
        raise(errc::sample_too_small, "bootknife needs at least two values");

    std::vector<double> out;
    out.reserve(n);
    if (method == resample_method::bootstrap) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(sample[rng.uniform_index(n)]);
        return out;
    }
    const std::size_t deleted = rng.uniform_index(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = rng.uniform_index(n - 1);
        if (j >= deleted) ++j;
        out.push_back(sample[j]);
    }
    return out;
}

namespace {

constexpr double max_failure_fraction = 0.10;

void check_failures(int failed, int attempted) {
    if (failed > static_cast<double>(attempted) * max_failure_fraction) {
        std::ostringstream msg;
        msg << failed << " of " << attempted << " replicate fits failed";
        raise(errc::too_many_failures, msg.str());
    }
}

} // namespace

aggregate_mle_result aggregate_mle(std::span<const double> sample, severity_family family,
                                   const resample_spec& spec) {
    if (spec.b < 1) raise(errc::domain_error, "resample count B must be >= 1");

    // Canonical order makes the index draws independent of input permutation.
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    const rng_stream root(spec.seed);
    std::array<double, 2> sum = {0.0, 0.0};
    int ok = 0, failed = 0;
    severity_model last{};
    for (int i = 0; i < spec.b; ++i) {
        auto stream = root.derive(static_cast<std::uint64_t>(i));
        const auto secondary = resample_once(sorted, spec.method, stream);
        try {
            last = fit_mle(family, secondary);
        } catch (const error& e) {
            if (e.code() == errc::degenerate_sample || e.code() == errc::non_convergence) {
                ++failed;
                continue;
            }
            throw;
        }
        sum[0] += last.params[0];
        sum[1] += last.params[1];
        ++ok;
    }
    check_failures(failed, spec.b);
    if (ok == 0) raise(errc::too_many_failures, "every replicate fit failed");

    severity_model mean_model{family,
                              {sum[0] / static_cast<double>(ok), sum[1] / static_cast<double>(ok)}};
    return {mean_model, spec.b, failed};
}

synth_estimate_result synth_estimate(std::span<const synthetic_batch> batches,
                                     severity_family family, intensity_family int_family) {
    if (batches.empty()) raise(errc::empty_sample, "need at least one synthetic batch");

    std::array<double, 2> sev_sum = {0.0, 0.0};
    std::array<double, 3> int_sum = {0.0, 0.0, 0.0};
    double phase_anchor = 0.0;
    int ok = 0, failed = 0;
    for (const auto& batch : batches) {
        std::vector<double> times = batch.times;
        std::sort(times.begin(), times.end());
        severity_model sev;
        intensity_model inten;
        try {
            sev = fit_mle(family, batch.values);
            inten = fit_intensity(times, int_family);
        } catch (const error& e) {
            switch (e.code()) {
            case errc::degenerate_sample:
            case errc::non_convergence:
            case errc::invalid_model:
            case errc::sample_too_small:
                ++failed;
                continue;
            default: throw;
            }
        }
        sev_sum[0] += sev.params[0];
        sev_sum[1] += sev.params[1];
        int_sum[0] += inten.params[0];
        int_sum[1] += inten.params[1];
        if (int_family == intensity_family::sinusoidal) {
            // Unwrap the periodic phase towards the first batch's value so the
            // arithmetic mean is taken on one branch.
            double phase = inten.params[2];
            if (ok == 0) {
                phase_anchor = phase;
            } else {
                phase -= std::round(phase - phase_anchor);
            }
            int_sum[2] += phase;
        }
        ++ok;
    }
    check_failures(failed, static_cast<int>(batches.size()));
    if (ok == 0) raise(errc::too_many_failures, "every synthetic batch failed to fit");

    const auto denom = static_cast<double>(ok);
    severity_model sev_mean{family, {sev_sum[0] / denom, sev_sum[1] / denom}};
    intensity_model int_mean{int_family, {int_sum[0] / denom, int_sum[1] / denom, 0.0}};
    if (int_family == intensity_family::sinusoidal) {
        int_mean.params[2] = int_sum[2] / denom;
        int_mean = int_mean.canonicalized();
    }
    return {sev_mean, int_mean, static_cast<int>(batches.size()), failed};
}

synthetic_batch load_synthetic_batch(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "cannot open synthetic batch CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) raise(errc::empty_file, "empty synthetic batch CSV: " + path);

    auto fields_of = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r' && c != ' ' && c != '\t') {
                cur.push_back(c);
            }
        }
        out.push_back(cur);
        return out;
    };

    const auto header = fields_of(line);
    std::size_t value_idx = header.size(), time_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "value") value_idx = i;
        if (header[i] == "time") time_idx = i;
    }
    if (value_idx == header.size() || time_idx == header.size())
        raise(errc::missing_column, "synthetic batch CSV needs `value` and `time` columns");

    synthetic_batch batch;
    batch.source_tag = path;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = fields_of(line);
        if (fields.size() <= std::max(value_idx, time_idx))
            raise(errc::unparseable_row, path + ": row " + std::to_string(row) + " is short");
        try {
            batch.values.push_back(std::stod(fields[value_idx]));
            batch.times.push_back(std::stod(fields[time_idx]));
        } catch (const std::exception&) {
            raise(errc::unparseable_row, path + ": row " + std::to_string(row) + " is not numeric");
        }
        if (!(batch.values.back() > 0.0))
            raise(errc::non_positive_value,
                  path + ": row " + std::to_string(row) + " has a non-positive value");
        if (batch.times.back() < 0.0)
            raise(errc::unparseable_row,
                  path + ": row " + std::to_string(row) + " has a negative time");
    }
    if (batch.values.empty()) raise(errc::empty_file, "no data rows in batch CSV: " + path);
    return batch;
}

std::vector<synthetic_batch> load_synthetic_batches(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) raise(errc::io_error, "cannot open batch manifest: " + manifest_path);
    const auto base = std::filesystem::path(manifest_path).parent_path();

    std::vector<synthetic_batch> batches;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::filesystem::path p(line);
        if (p.is_relative()) p = base / p;
        batches.push_back(load_synthetic_batch(p.string()));
    }
    if (batches.empty()) raise(errc::empty_file, "batch manifest lists no files: " + manifest_path);
    return batches;
}

} // namespace catrisk
