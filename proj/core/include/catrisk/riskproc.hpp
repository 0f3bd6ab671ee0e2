#pragma once

#include "catrisk/intensity.hpp"
#include "catrisk/severity.hpp"

#include <cstdint>
#include <vector>

namespace catrisk {

// Configuration of the risk-reserve simulation R_t = u + p*t - S_t.
struct risk_config {
    double initial_reserve = 0.0; // u, same monetary unit as the claims
    double premium_rate = 0.0;    // p, per year; must be >= 0
    double horizon = 1.0;         // T, years
    int trajectories = 1000;      // n
    std::uint64_t seed = 0;
};

struct trajectory_summary {
    std::vector<double> s_t_values; // simulated aggregate claims at T, one per trajectory
    long ruin_count = 0;            // trajectories whose reserve dipped below zero
};

struct error_metrics_result {
    double mse = 0.0;
    double mae = 0.0;
};

struct ruin_estimate {
    double probability = 0.0;
    double std_error = 0.0; // binomial Monte Carlo standard error
    int trajectories = 0;
};

// Simulate the claim process S_T = sum of severity draws at NHPP event times.
// Trajectory i uses the stream derived from (seed, i), so results do not
// depend on evaluation order.
trajectory_summary simulate_claim_process(const severity_model& severity,
                                          const intensity_model& intensity, double horizon,
                                          int trajectories, std::uint64_t seed);

error_metrics_result error_metrics(double realized_s_t, const trajectory_summary& summary);

// Fraction of trajectories where u + p*t - S_t goes negative in [0, T].
// Premiums accrue continuously, so the reserve can only cross zero at claim
// instants; the check there is exact for p >= 0.
ruin_estimate ruin_probability(const severity_model& severity, const intensity_model& intensity,
                               const risk_config& config);

} // namespace catrisk
