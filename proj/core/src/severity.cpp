#include "catrisk/severity.hpp"

#include "catrisk/errors.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace catrisk {

namespace {

constexpr double sqrt2 = 1.4142135623730951;

double require_order(double u) {
    if (!(u > 0.0 && u < 1.0))
        raise(errc::domain_error, "quantile order must lie in (0, 1)");
    return u;
}

void require_positive_params(const severity_model& m) {
    if (!(m.params[0] > 0.0))
        raise(errc::invalid_model, "first distribution parameter must be positive");
    if (m.param_count() > 1) {
        const bool ok = m.family == severity_family::log_normal ? m.params[1] >= 0.0
                                                                : m.params[1] > 0.0;
        if (!ok) raise(errc::invalid_model, "second distribution parameter out of range");
    }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / sqrt2); }
double normal_quantile(double u) { return sqrt2 * boost::math::erf_inv(2.0 * u - 1.0); }

struct sample_stats {
    double mean = 0.0;
    double mean_log = 0.0;
    bool all_equal = false;
};

sample_stats validate_sample(std::span<const double> sample) {
    if (sample.size() < 2)
        raise(errc::sample_too_small, "MLE requires at least two observations");
    sample_stats s;
    double lo = sample.front(), hi = sample.front();
    for (double x : sample) {
        if (!(x > 0.0)) raise(errc::non_positive_value, "claim values must be positive");
        s.mean += x;
        s.mean_log += std::log(x);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const auto n = static_cast<double>(sample.size());
    s.mean /= n;
    s.mean_log /= n;
    s.all_equal = lo == hi;
    return s;
}

// Shape MLE for gamma: ln(alpha) - psi(alpha) = s, solved by Newton from the
// Minka moment start. The left side is strictly decreasing to 0, so the root
// is unique for s > 0.
double solve_gamma_shape(double s) {
    double alpha = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int it = 0; it < 200; ++it) {
        const double f = std::log(alpha) - boost::math::digamma(alpha) - s;
        const double fp = 1.0 / alpha - boost::math::trigamma(alpha);
        double step = f / fp;
        if (alpha - step <= 0.0) step = alpha / 2.0; // keep iterate positive
        alpha -= step;
        if (std::abs(step) <= 1e-10 * alpha) break;
    }
    if (std::abs(std::log(alpha) - boost::math::digamma(alpha) - s) > 1e-9)
        raise(errc::non_convergence, "gamma shape iteration did not reach stationarity");
    return alpha;
}

// Weibull profile score in the shape k. Strictly increasing in k, so Newton
// with a bisection safeguard is globally convergent once bracketed. Data are
// pre-scaled by the sample maximum, keeping x^k in [0, 1].
double solve_weibull_shape(std::span<const double> scaled, double mean_log_scaled) {
    const auto n = scaled.size();
    auto score = [&](double k, double& deriv) {
        double sw = 0.0, swl = 0.0, swl2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lx = std::log(scaled[i]);
            const double w = std::pow(scaled[i], k);
            sw += w;
            swl += w * lx;
            swl2 += w * lx * lx;
        }
        deriv = (swl2 * sw - swl * swl) / (sw * sw) + 1.0 / (k * k);
        return swl / sw - 1.0 / k - mean_log_scaled;
    };

    double k = 1.0, deriv = 0.0;
    double g = score(k, deriv);
    double lo = k, hi = k;
    if (g < 0.0) {
        while (g < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e6) raise(errc::non_convergence, "weibull shape bracket expansion failed");
            g = score(hi, deriv);
        }
        k = hi;
    } else {
        while (g > 0.0) {
            hi = lo;
            lo /= 2.0;
            if (lo < 1e-8) raise(errc::non_convergence, "weibull shape bracket expansion failed");
            g = score(lo, deriv);
        }
        k = lo;
    }

    for (int it = 0; it < 200; ++it) {
        g = score(k, deriv);
        if (g > 0.0)
            hi = k;
        else
            lo = k;
        double next = k - g / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - k);
        k = next;
        if (step <= 1e-10 * k) break;
    }
    if (std::abs(score(k, deriv)) > 1e-9)
        raise(errc::non_convergence, "weibull shape iteration did not reach stationarity");
    return k;
}

} // namespace

std::string_view family_name(severity_family f) {
    switch (f) {
    case severity_family::exponential: return "Exponential";
    case severity_family::log_normal: return "LogNormal";
    case severity_family::gamma: return "Gamma";
    case severity_family::weibull: return "Weibull";
    }
    return "Exponential";
}

severity_family family_from_name(std::string_view name) {
    for (auto f : all_severity_families)
        if (name == family_name(f)) return f;
    if (name == "Exp") return severity_family::exponential;
    if (name == "LN") return severity_family::log_normal;
    if (name == "Weib") return severity_family::weibull;
    raise(errc::usage_error, "unknown severity family: " + std::string(name));
}

double severity_model::pdf(double x) const {
    if (x < 0.0) return 0.0;
    switch (family) {
    case severity_family::exponential: {
        const double lambda = params[0];
        return lambda * std::exp(-lambda * x);
    }
    case severity_family::log_normal: {
        if (x <= 0.0) return 0.0;
        const double mu = params[0], sigma = std::sqrt(params[1]);
        const double z = (std::log(x) - mu) / sigma;
        return std::exp(-0.5 * z * z) / (x * sigma * std::sqrt(2.0 * M_PI));
    }
    case severity_family::gamma: {
        if (x <= 0.0) return 0.0;
        const double alpha = params[0], beta = params[1];
        return std::exp(alpha * std::log(beta) + (alpha - 1.0) * std::log(x) - beta * x -
                        std::lgamma(alpha));
    }
    case severity_family::weibull: {
        if (x <= 0.0) return 0.0;
        const double k = params[0], scale = params[1];
        const double z = x / scale;
        return (k / scale) * std::pow(z, k - 1.0) * std::exp(-std::pow(z, k));
    }
    }
    return 0.0;
}

double severity_model::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    switch (family) {
    case severity_family::exponential:
        return -std::expm1(-params[0] * x);
    case severity_family::log_normal:
        return normal_cdf((std::log(x) - params[0]) / std::sqrt(params[1]));
    case severity_family::gamma:
        return boost::math::gamma_p(params[0], params[1] * x);
    case severity_family::weibull:
        return -std::expm1(-std::pow(x / params[1], params[0]));
    }
    return 0.0;
}

double severity_model::quantile(double order) const {
    const double u = require_order(order);
    switch (family) {
    case severity_family::exponential:
        return -std::log1p(-u) / params[0];
    case severity_family::log_normal:
        return std::exp(params[0] + std::sqrt(params[1]) * normal_quantile(u));
    case severity_family::gamma:
        return boost::math::gamma_p_inv(params[0], u) / params[1];
    case severity_family::weibull:
        return params[1] * std::pow(-std::log1p(-u), 1.0 / params[0]);
    }
    return 0.0;
}

double severity_model::mean() const {
    switch (family) {
    case severity_family::exponential: return 1.0 / params[0];
    case severity_family::log_normal: return std::exp(params[0] + 0.5 * params[1]);
    case severity_family::gamma: return params[0] / params[1];
    case severity_family::weibull:
        return params[1] * std::exp(std::lgamma(1.0 + 1.0 / params[0]));
    }
    return 0.0;
}

double severity_model::second_moment() const {
    switch (family) {
    case severity_family::exponential: return 2.0 / (params[0] * params[0]);
    case severity_family::log_normal: return std::exp(2.0 * params[0] + 2.0 * params[1]);
    case severity_family::gamma: return params[0] * (params[0] + 1.0) / (params[1] * params[1]);
    case severity_family::weibull:
        return params[1] * params[1] * std::exp(std::lgamma(1.0 + 2.0 / params[0]));
    }
    return 0.0;
}

std::vector<double> severity_model::sample(std::size_t n, rng_stream& rng) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
    return out;
}

severity_model make_exponential(double lambda) {
    severity_model m{severity_family::exponential, {lambda, 0.0}};
    require_positive_params(m);
    return m;
}

severity_model make_log_normal(double mu, double sigma2) {
    if (!(sigma2 > 0.0)) raise(errc::invalid_model, "log-normal variance must be positive");
    return severity_model{severity_family::log_normal, {mu, sigma2}};
}

severity_model make_gamma(double shape, double rate) {
    severity_model m{severity_family::gamma, {shape, rate}};
    require_positive_params(m);
    return m;
}

severity_model make_weibull(double shape, double scale) {
    severity_model m{severity_family::weibull, {shape, scale}};
    require_positive_params(m);
    return m;
}

severity_model fit_mle(severity_family family, std::span<const double> sample) {
    const auto stats = validate_sample(sample);
    const auto n = static_cast<double>(sample.size());

    switch (family) {
    case severity_family::exponential:
        return make_exponential(1.0 / stats.mean);

    case severity_family::log_normal: {
        double ss = 0.0;
        for (double x : sample) {
            const double d = std::log(x) - stats.mean_log;
            ss += d * d;
        }
        const double sigma2 = ss / n;
        if (stats.all_equal || sigma2 == 0.0)
            raise(errc::degenerate_sample, "log-normal fit needs dispersion in the sample");
        return make_log_normal(stats.mean_log, sigma2);
    }

    case severity_family::gamma: {
        const double s = std::log(stats.mean) - stats.mean_log;
        if (stats.all_equal || !(s > 0.0))
            raise(errc::degenerate_sample, "gamma shape is undefined for a constant sample");
        const double alpha = solve_gamma_shape(s);
        return make_gamma(alpha, alpha / stats.mean);
    }

    case severity_family::weibull: {
        if (stats.all_equal)
            raise(errc::degenerate_sample, "weibull shape is undefined for a constant sample");
        const double scale_unit = *std::max_element(sample.begin(), sample.end());
        std::vector<double> scaled(sample.begin(), sample.end());
        for (double& x : scaled) x /= scale_unit;
        const double k = solve_weibull_shape(scaled, stats.mean_log - std::log(scale_unit));
        double sw = 0.0;
        for (double x : scaled) sw += std::pow(x, k);
        const double lambda = scale_unit * std::pow(sw / n, 1.0 / k);
        return make_weibull(k, lambda);
    }
    }
    raise(errc::usage_error, "unknown severity family");
}

double log_likelihood(const severity_model& model, std::span<const double> sample) {
    double ll = 0.0;
    for (double x : sample) ll += std::log(model.pdf(x));
    return ll;
}

std::string to_json(const severity_model& model) {
    nlohmann::json j;
    j["family"] = std::string(family_name(model.family));
    nlohmann::json p;
    switch (model.family) {
    case severity_family::exponential: p["lambda"] = model.params[0]; break;
    case severity_family::log_normal:
        p["mu"] = model.params[0];
        p["sigma2"] = model.params[1];
        break;
    case severity_family::gamma:
        p["alpha"] = model.params[0];
        p["beta"] = model.params[1];
        break;
    case severity_family::weibull:
        p["k"] = model.params[0];
        p["lambda"] = model.params[1];
        break;
    }
    j["params"] = std::move(p);
    return j.dump();
}

severity_model severity_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("family") || !j.contains("params"))
        raise(errc::io_error, "malformed severity model JSON");
    const auto family = family_from_name(j["family"].get<std::string>());
    const auto& p = j["params"];
    try {
        switch (family) {
        case severity_family::exponential:
            return make_exponential(p.at("lambda").get<double>());
        case severity_family::log_normal:
            return make_log_normal(p.at("mu").get<double>(), p.at("sigma2").get<double>());
        case severity_family::gamma:
            return make_gamma(p.at("alpha").get<double>(), p.at("beta").get<double>());
        case severity_family::weibull:
            return make_weibull(p.at("k").get<double>(), p.at("lambda").get<double>());
        }
    } catch (const nlohmann::json::exception&) {
        raise(errc::io_error, "severity model JSON misses a parameter");
    }
    raise(errc::io_error, "malformed severity model JSON");
}

} // namespace catrisk
