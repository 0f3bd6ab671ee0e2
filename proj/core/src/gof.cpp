#include "catrisk/errors.hpp"
#include "catrisk/severity.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace catrisk {

namespace {

double ks_statistic(const severity_model& model, std::vector<double>& sorted) {
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = model.cdf(sorted[i]);
        const double upper = (static_cast<double>(i) + 1.0) / n - f;
        const double lower = f - static_cast<double>(i) / n;
        d = std::max({d, upper, lower});
    }
    return d;
}

double cvm_statistic(const severity_model& model, std::vector<double>& sorted) {
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double w2 = 1.0 / (12.0 * n);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = model.cdf(sorted[i]);
        const double u = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
        w2 += (f - u) * (f - u);
    }
    return w2;
}

double statistic(const severity_model& model, std::span<const double> sample, gof_kind kind) {
    std::vector<double> sorted(sample.begin(), sample.end());
    return kind == gof_kind::ks ? ks_statistic(model, sorted) : cvm_statistic(model, sorted);
}

} // namespace

double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.0) {
        // Jacobi-theta dual form, fast for small arguments.
        double sum = 0.0;
        for (int k = 1; k <= 21; k += 2) {
            const double e = std::exp(-k * k * M_PI * M_PI / (8.0 * t * t));
            if (e == 0.0) break;
            sum += e;
        }
        return 1.0 - std::sqrt(2.0 * M_PI) / t * sum;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        if (term < 1e-18) break;
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double cramer_von_mises_cdf(double x) {
    if (x <= 0.0) return 0.0;
    // Limiting distribution of W^2 expressed through K_{1/4} Bessel terms
    // (Anderson-Darling / Smirnov series).
    double sum = 0.0;
    for (int k = 0; k < 40; ++k) {
        const double y = 4.0 * k + 1.0;
        const double q = y * y / (16.0 * x);
        if (q > 600.0) break; // exp(-q) * K underflows
        const double coef =
            std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) / (std::pow(M_PI, 1.5) * std::sqrt(x));
        const double term =
            coef * std::sqrt(y) * std::exp(-q) * boost::math::cyl_bessel_k(0.25, q);
        sum += (k % 2 == 0) ? term : -term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

gof_result gof_test(const severity_model& model, std::span<const double> sample, gof_kind kind) {
    if (sample.empty()) raise(errc::empty_sample, "goodness-of-fit test needs observations");
    const double stat = statistic(model, sample, kind);
    const auto n = static_cast<double>(sample.size());
    const double p = kind == gof_kind::ks ? kolmogorov_sf(std::sqrt(n) * stat)
                                          : 1.0 - cramer_von_mises_cdf(stat);
    return {stat, p, kind};
}

gof_result gof_test_bootstrap(const severity_model& model, std::span<const double> sample,
                              gof_kind kind, int b, rng_stream rng) {
    if (sample.empty()) raise(errc::empty_sample, "goodness-of-fit test needs observations");
    if (b < 1) raise(errc::domain_error, "bootstrap replication count must be positive");
    const double observed = statistic(model, sample, kind);
    int exceed = 0;
    for (int i = 0; i < b; ++i) {
        auto stream = rng.derive(static_cast<std::uint64_t>(i));
        const auto synth = model.sample(sample.size(), stream);
        double stat;
        try {
            const auto refit = fit_mle(model.family, synth);
            stat = statistic(refit, synth, kind);
        } catch (const error&) {
            // A degenerate replicate cannot beat the observed fit.
            ++exceed;
            continue;
        }
        if (stat >= observed) ++exceed;
    }
    const double p = (1.0 + exceed) / (static_cast<double>(b) + 1.0);
    return {observed, p, kind};
}

} // namespace catrisk
