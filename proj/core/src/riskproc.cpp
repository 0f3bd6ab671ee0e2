#include "catrisk/riskproc.hpp"

#include "catrisk/errors.hpp"

#include <cmath>

namespace catrisk {

trajectory_summary simulate_claim_process(const severity_model& severity,
                                          const intensity_model& intensity, double horizon,
                                          int trajectories, std::uint64_t seed) {
    if (!(horizon > 0.0)) raise(errc::domain_error, "horizon must be positive");
    if (trajectories < 1) raise(errc::domain_error, "need at least one trajectory");

    trajectory_summary summary;
    summary.s_t_values.reserve(static_cast<std::size_t>(trajectories));
    const rng_stream root(seed);
    for (int i = 0; i < trajectories; ++i) {
        auto stream = root.derive(static_cast<std::uint64_t>(i));
        const auto events = intensity.simulate(horizon, stream);
        double total = 0.0;
        for (std::size_t k = 0; k < events.size(); ++k) total += severity.sample(stream);
        summary.s_t_values.push_back(total);
    }
    return summary;
}

error_metrics_result error_metrics(double realized_s_t, const trajectory_summary& summary) {
    if (summary.s_t_values.empty()) raise(errc::empty_sample, "no trajectories to score");
    double se = 0.0, ae = 0.0;
    for (double s : summary.s_t_values) {
        const double d = realized_s_t - s;
        se += d * d;
        ae += std::abs(d);
    }
    const auto n = static_cast<double>(summary.s_t_values.size());
    return {se / n, ae / n};
}

ruin_estimate ruin_probability(const severity_model& severity, const intensity_model& intensity,
                               const risk_config& config) {
    if (!(config.horizon > 0.0)) raise(errc::domain_error, "horizon must be positive");
    if (config.trajectories < 1) raise(errc::domain_error, "need at least one trajectory");
    if (config.initial_reserve < 0.0) raise(errc::domain_error, "initial reserve must be >= 0");
    if (config.premium_rate < 0.0)
        raise(errc::domain_error, "negative premium rates are not supported");

    long ruined = 0;
    const rng_stream root(config.seed);
    for (int i = 0; i < config.trajectories; ++i) {
        auto stream = root.derive(static_cast<std::uint64_t>(i));
        const auto events = intensity.simulate(config.horizon, stream);
        double claims = 0.0;
        for (double t : events) {
            claims += severity.sample(stream);
            if (config.initial_reserve + config.premium_rate * t - claims < 0.0) {
                ++ruined;
                break;
            }
        }
    }
    const auto n = static_cast<double>(config.trajectories);
    const double p = static_cast<double>(ruined) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), config.trajectories};
}

} // namespace catrisk
