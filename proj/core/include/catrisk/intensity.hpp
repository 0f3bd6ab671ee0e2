#pragma once

#include "catrisk/rng.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace catrisk {

enum class intensity_family { sinusoidal, power_law };

std::string_view family_name(intensity_family f);
intensity_family intensity_from_name(std::string_view name);
constexpr std::array<intensity_family, 2> all_intensity_families = {
    intensity_family::sinusoidal, intensity_family::power_law};

// NHPP intensity.
//
//   sinusoidal: lambda(t) = l0 + l1 * 2*pi * sin(2*pi*(t - l2)),  params = {l0, l1, l2}
//   power_law:  lambda(t) = l0 * l1 * t^(l1 - 1),                 params = {l0, l1}
//
// Sinusoidal parameters with 2*pi*l1 > l0 dip below zero on part of each
// period. Such models are accepted (they arise from least-squares fits) but
// flagged; simulation then runs on the clamped intensity max(lambda, 0).
struct intensity_model {
    intensity_family family = intensity_family::power_law;
    std::array<double, 3> params = {0.0, 0.0, 0.0};

    std::size_t param_count() const noexcept {
        return family == intensity_family::sinusoidal ? 3 : 2;
    }

    double intensity_at(double t) const;

    // Closed-form cumulative intensity of the raw lambda.
    double cumulative(double t) const;

    // Cumulative of max(lambda, 0); equal to cumulative() when the intensity
    // never goes negative. Piecewise closed form, monotone non-decreasing.
    double clamped_cumulative(double t) const;

    // Solve cumulative(t) = s. Power law inverts in closed form; sinusoidal
    // uses safeguarded Newton started at s / l0.
    double inverse_cumulative(double s) const;

    bool has_negative_intensity() const;

    // Event times on [0, horizon] by time-scale inversion of a unit-rate
    // Poisson stream through the clamped cumulative intensity.
    std::vector<double> simulate(double horizon, rng_stream& rng) const;

    // Equivalent parameterization with l1 >= 0 and phase reduced to [0, 1);
    // identity for power law.
    intensity_model canonicalized() const;
};

intensity_model make_sinusoidal(double base_rate, double amplitude, double phase);
intensity_model make_power_law(double scale, double exponent);

// Least-squares fit of the cumulative intensity to the event-count staircase:
// minimizes sum_k (k - Lambda(t_k))^2 over the sorted event times by
// Levenberg-Marquardt with analytic Jacobians. The returned sinusoidal model
// is in canonical form.
intensity_model fit_intensity(std::span<const double> event_times, intensity_family family);

std::string to_json(const intensity_model& model);
intensity_model intensity_from_json(std::string_view text);

} // namespace catrisk
