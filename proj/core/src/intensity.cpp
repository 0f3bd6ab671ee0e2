#include "catrisk/intensity.hpp"

#include "catrisk/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace catrisk {

namespace {

constexpr double two_pi = 2.0 * M_PI;

// Per-period negative stretch of a canonical sinusoid (l1 > 0), as offsets in
// [0, 1) relative to the phase: lambda < 0 on (begin + j, end + j) for all
// integers j, where begin/end are measured in periods from l2.
struct negative_window {
    bool exists = false;
    double begin = 0.0;
    double end = 0.0;
};

negative_window sinusoid_negative_window(double l0, double l1) {
    negative_window w;
    const double amplitude = two_pi * l1;
    if (amplitude <= l0) return w;
    const double c = std::asin(l0 / amplitude); // in [0, pi/2)
    w.exists = true;
    w.begin = (M_PI + c) / two_pi;
    w.end = (two_pi - c) / two_pi;
    return w;
}

} // namespace

std::string_view family_name(intensity_family f) {
    return f == intensity_family::sinusoidal ? "Sinusoidal" : "PowerLaw";
}

intensity_family intensity_from_name(std::string_view name) {
    if (name == "Sinusoidal") return intensity_family::sinusoidal;
    if (name == "PowerLaw" || name == "Power Law") return intensity_family::power_law;
    raise(errc::usage_error, "unknown intensity family: " + std::string(name));
}

double intensity_model::intensity_at(double t) const {
    if (family == intensity_family::sinusoidal) {
        return params[0] + params[1] * two_pi * std::sin(two_pi * (t - params[2]));
    }
    const double l0 = params[0], l1 = params[1];
    if (t == 0.0) {
        if (l1 < 1.0) raise(errc::singular_point, "power-law intensity diverges at t = 0");
        if (l1 == 1.0) return l0;
        return 0.0;
    }
    if (t < 0.0) raise(errc::domain_error, "intensity requires t >= 0");
    return l0 * l1 * std::pow(t, l1 - 1.0);
}

double intensity_model::cumulative(double t) const {
    if (t < 0.0) raise(errc::domain_error, "cumulative intensity requires t >= 0");
    if (family == intensity_family::sinusoidal) {
        const double l0 = params[0], l1 = params[1], l2 = params[2];
        return l0 * t + l1 * (std::cos(two_pi * l2) - std::cos(two_pi * (t - l2)));
    }
    return params[0] * std::pow(t, params[1]);
}

bool intensity_model::has_negative_intensity() const {
    if (family == intensity_family::power_law) return false;
    return two_pi * std::abs(params[1]) > params[0];
}

intensity_model intensity_model::canonicalized() const {
    if (family == intensity_family::power_law) return *this;
    double l1 = params[1], l2 = params[2];
    if (l1 < 0.0) {
        l1 = -l1;
        l2 += 0.5;
    }
    l2 -= std::floor(l2); // reduce to [0, 1); the model is periodic in l2
    return intensity_model{family, {params[0], l1, l2}};
}

double intensity_model::clamped_cumulative(double t) const {
    if (!has_negative_intensity()) return cumulative(t);
    const auto canon = canonicalized();
    const double l2 = canon.params[2];
    const auto w = sinusoid_negative_window(canon.params[0], canon.params[1]);
    // Subtract the (negative) integral of lambda over every dip intersecting
    // [0, t]; each piece is a difference of the closed-form cumulative.
    double correction = 0.0;
    const long j_lo = static_cast<long>(std::floor(0.0 - l2 - w.end)) - 1;
    const long j_hi = static_cast<long>(std::floor(t - l2 - w.begin)) + 1;
    for (long j = j_lo; j <= j_hi; ++j) {
        const double a = std::max(0.0, l2 + w.begin + static_cast<double>(j));
        const double b = std::min(t, l2 + w.end + static_cast<double>(j));
        if (b > a) correction += canon.cumulative(b) - canon.cumulative(a);
    }
    return cumulative(t) - correction;
}

double intensity_model::inverse_cumulative(double s) const {
    if (s < 0.0) raise(errc::domain_error, "cumulative level must be non-negative");
    if (s == 0.0) return 0.0;
    if (family == intensity_family::power_law)
        return std::pow(s / params[0], 1.0 / params[1]);

    const double l0 = params[0];
    double t = s / l0; // exact when the oscillation integrates to zero
    const double tol = 1e-11 * std::max(1.0, s);
    for (int it = 0; it < 200; ++it) {
        const double f = cumulative(t) - s;
        if (std::abs(f) <= tol) return t;
        const double df = intensity_at(t);
        double step;
        if (std::abs(df) > 1e-9 * l0) {
            step = f / df;
            // limit steps to half a period so Newton cannot vault across
            // oscillations
            step = std::clamp(step, -0.5, 0.5);
        } else {
            step = f > 0.0 ? 0.25 : -0.25;
        }
        t = std::max(0.0, t - step);
    }
    raise(errc::not_invertible, "cumulative intensity has no locally increasing solution here");
}

std::vector<double> intensity_model::simulate(double horizon, rng_stream& rng) const {
    if (!(horizon > 0.0)) raise(errc::domain_error, "simulation horizon must be positive");
    std::vector<double> events;
    const bool clamped = has_negative_intensity();
    const double total = clamped ? clamped_cumulative(horizon) : cumulative(horizon);
    if (total <= 0.0) return events;

    double s = rng.exponential();
    while (s <= total) {
        double t;
        if (!clamped) {
            t = inverse_cumulative(s);
        } else {
            // Bisection on the monotone clamped cumulative.
            double lo = 0.0, hi = horizon;
            for (int it = 0; it < 200 && hi - lo > 1e-12 * horizon; ++it) {
                const double mid = 0.5 * (lo + hi);
                (clamped_cumulative(mid) < s ? lo : hi) = mid;
            }
            t = 0.5 * (lo + hi);
        }
        events.push_back(std::min(t, horizon));
        s += rng.exponential();
    }
    std::sort(events.begin(), events.end());
    return events;
}

intensity_model make_sinusoidal(double base_rate, double amplitude, double phase) {
    if (!(base_rate > 0.0))
        raise(errc::invalid_model, "sinusoidal base rate must be positive");
    return intensity_model{intensity_family::sinusoidal, {base_rate, amplitude, phase}};
}

intensity_model make_power_law(double scale, double exponent) {
    if (!(scale > 0.0 && exponent > 0.0))
        raise(errc::invalid_model, "power-law parameters must be positive");
    return intensity_model{intensity_family::power_law, {scale, exponent, 0.0}};
}

namespace {

// Dense linear algebra for <= 3 parameters: solve (A + mu*diag(A)) x = b by
// Cholesky without pivoting; A is symmetric positive semi-definite.
bool solve_damped(const double a[3][3], const double b[3], double mu, int n, double x[3]) {
    double m[3][3];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
    for (int i = 0; i < n; ++i) m[i][i] += mu * std::max(a[i][i], 1e-12);

    double chol[3][3] = {};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = m[i][j];
            for (int k = 0; k < j; ++k) sum -= chol[i][k] * chol[j][k];
            if (i == j) {
                if (sum <= 0.0) return false;
                chol[i][i] = std::sqrt(sum);
            } else {
                chol[i][j] = sum / chol[j][j];
            }
        }
    }
    double y[3];
    for (int i = 0; i < n; ++i) {
        double sum = b[i];
        for (int k = 0; k < i; ++k) sum -= chol[i][k] * y[k];
        y[i] = sum / chol[i][i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double sum = y[i];
        for (int k = i + 1; k < n; ++k) sum -= chol[k][i] * x[k];
        x[i] = sum / chol[i][i];
    }
    return true;
}

struct lm_problem {
    intensity_family family;
    std::span<const double> times;

    int dim() const { return family == intensity_family::sinusoidal ? 3 : 2; }

    double residual_and_jacobian(const double p[3], std::size_t k, double jac[3]) const {
        const double t = times[k];
        const double count = static_cast<double>(k) + 1.0;
        if (family == intensity_family::power_law) {
            const double tp = std::pow(t, p[1]);
            jac[0] = tp;
            jac[1] = p[0] * tp * std::log(t);
            jac[2] = 0.0;
            return count - p[0] * tp;
        }
        const double cos0 = std::cos(two_pi * p[2]);
        const double cost = std::cos(two_pi * (t - p[2]));
        jac[0] = t;
        jac[1] = cos0 - cost;
        jac[2] = -two_pi * p[1] * (std::sin(two_pi * p[2]) + std::sin(two_pi * (t - p[2])));
        return count - (p[0] * t + p[1] * (cos0 - cost));
    }

    // Residual sum of squares, gradient of the objective, and normal matrix.
    double assemble(const double p[3], double grad[3], double a[3][3]) const {
        const int n = dim();
        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            grad[i] = 0.0;
            for (int j = 0; j < n; ++j) a[i][j] = 0.0;
        }
        double jac[3];
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double r = residual_and_jacobian(p, k, jac);
            rss += r * r;
            for (int i = 0; i < n; ++i) {
                grad[i] += jac[i] * r; // J^T r; objective gradient is -2 J^T r
                for (int j = 0; j <= i; ++j) a[i][j] += jac[i] * jac[j];
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) a[i][j] = a[j][i];
        return rss;
    }
};

void initial_guess(const lm_problem& prob, double p[3]) {
    const auto& t = prob.times;
    const auto m = t.size();
    if (prob.family == intensity_family::power_law) {
        // log-log regression of the count staircase
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double x = std::log(t[k]);
            const double y = std::log(static_cast<double>(k) + 1.0);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(m);
        const double denom = n * sxx - sx * sx;
        const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 1.0;
        const double icept = (sy - slope * sx) / n;
        p[1] = std::clamp(slope, 0.05, 20.0);
        p[0] = std::exp(icept);
        p[2] = 0.0;
        return;
    }
    const double l0 = static_cast<double>(m) / t.back();
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (std::size_t k = 0; k < m; ++k) {
        const double r = static_cast<double>(k) + 1.0 - l0 * t[k];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    p[0] = l0;
    p[1] = (rmax - rmin) / 2.0 / two_pi;
    p[2] = 0.0;
}

} // namespace

intensity_model fit_intensity(std::span<const double> event_times, intensity_family family) {
    const std::size_t min_events = family == intensity_family::sinusoidal ? 3 : 2;
    if (event_times.size() < min_events)
        raise(errc::sample_too_small,
              std::string(family_name(family)) + " intensity fit needs at least " +
                  std::to_string(min_events) + " events");
    for (std::size_t k = 0; k < event_times.size(); ++k) {
        if (!(event_times[k] > 0.0))
            raise(errc::domain_error, "event times must be positive");
        if (k > 0 && event_times[k] < event_times[k - 1])
            raise(errc::domain_error, "event times must be sorted");
    }

    const lm_problem prob{family, event_times};
    const int dim = prob.dim();
    double p[3] = {0.0, 0.0, 0.0};
    initial_guess(prob, p);

    double grad[3], a[3][3];
    double rss = prob.assemble(p, grad, a);
    double mu = 1e-3;
    constexpr int max_iter = 500;
    constexpr double grad_tol = 1e-8;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const double gnorm =
            2.0 * std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
        if (gnorm < grad_tol) break;

        double step[3] = {0.0, 0.0, 0.0};
        if (!solve_damped(a, grad, mu, dim, step)) {
            mu *= 10.0;
            continue;
        }
        double trial[3] = {p[0] + step[0], p[1] + step[1], p[2] + step[2]};
        if (family == intensity_family::power_law) {
            // keep the iterate in the model's domain
            trial[0] = std::max(trial[0], 1e-12);
            trial[1] = std::clamp(trial[1], 1e-6, 50.0);
        }
        double tgrad[3], ta[3][3];
        const double trial_rss = prob.assemble(trial, tgrad, ta);
        if (trial_rss < rss) {
            std::copy(trial, trial + 3, p);
            std::copy(tgrad, tgrad + 3, grad);
            for (int i = 0; i < 3; ++i) std::copy(ta[i], ta[i] + 3, a[i]);
            rss = trial_rss;
            mu = std::max(mu * 0.25, 1e-14);
        } else {
            mu *= 4.0;
            if (mu > 1e14) break;
        }
    }

    const double gnorm = 2.0 * std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
    if (gnorm >= grad_tol) {
        std::ostringstream msg;
        msg << family_name(family) << " intensity fit stalled: |grad| = " << gnorm
            << ", rss = " << rss << " after " << iter << " iterations";
        raise(errc::non_convergence, msg.str());
    }

    if (family == intensity_family::power_law) {
        if (!(p[0] > 0.0 && p[1] > 0.0))
            raise(errc::invalid_model, "power-law fit left the valid parameter domain");
        return make_power_law(p[0], p[1]);
    }
    if (!(p[0] > 0.0))
        raise(errc::invalid_model, "sinusoidal fit produced a non-positive base rate");
    return make_sinusoidal(p[0], p[1], p[2]).canonicalized();
}

std::string to_json(const intensity_model& model) {
    nlohmann::json j;
    j["family"] = std::string(family_name(model.family));
    nlohmann::json p;
    p["lambda0"] = model.params[0];
    p["lambda1"] = model.params[1];
    if (model.family == intensity_family::sinusoidal) p["lambda2"] = model.params[2];
    j["params"] = std::move(p);
    return j.dump();
}

intensity_model intensity_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("family") || !j.contains("params"))
        raise(errc::io_error, "malformed intensity model JSON");
    const auto family = intensity_from_name(j["family"].get<std::string>());
    const auto& p = j["params"];
    try {
        if (family == intensity_family::power_law)
            return make_power_law(p.at("lambda0").get<double>(), p.at("lambda1").get<double>());
        return make_sinusoidal(p.at("lambda0").get<double>(), p.at("lambda1").get<double>(),
                               p.at("lambda2").get<double>());
    } catch (const nlohmann::json::exception&) {
        raise(errc::io_error, "intensity model JSON misses a parameter");
    }
}

} // namespace catrisk
