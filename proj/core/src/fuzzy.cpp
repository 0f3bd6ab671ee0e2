#include "catrisk/fuzzy.hpp"

#include "catrisk/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace catrisk {

double quantile_type7(std::span<const double> sorted, double order) {
    if (sorted.empty()) raise(errc::empty_sample, "quantile of an empty sample");
    if (!(order >= 0.0 && order <= 1.0))
        raise(errc::domain_error, "quantile order must lie in [0, 1]");
    const double h = order * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

empirical_fuzzy_number empirical_fuzzy_number::from_sample(std::span<const double> values,
                                                           int grid_size) {
    if (values.size() < 2)
        raise(errc::sample_too_small, "fuzzy opinion needs at least two simulated values");
    if (grid_size < 2) raise(errc::domain_error, "alpha grid needs at least two levels");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    empirical_fuzzy_number fn;
    fn.alphas_.reserve(static_cast<std::size_t>(grid_size));
    fn.cuts_.reserve(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        const double alpha = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        fn.alphas_.push_back(alpha);
        fn.cuts_.push_back({quantile_type7(sorted, alpha / 2.0),
                            quantile_type7(sorted, 1.0 - alpha / 2.0)});
    }
    return fn;
}

interval empirical_fuzzy_number::alpha_cut(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        raise(errc::domain_error, "alpha must lie in [0, 1]");
    const double pos = alpha * static_cast<double>(alphas_.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= cuts_.size()) return cuts_.back();
    const double frac = pos - static_cast<double>(lo);
    return {cuts_[lo].lower + frac * (cuts_[lo + 1].lower - cuts_[lo].lower),
            cuts_[lo].upper + frac * (cuts_[lo + 1].upper - cuts_[lo].upper)};
}

double empirical_fuzzy_number::membership(double x) const {
    const auto& sup = cuts_.front();
    if (x < sup.lower || x > sup.upper) return 0.0;
    const auto& core = cuts_.back();
    if (x >= core.lower && x <= core.upper) return 1.0;

    const double step = 1.0 / static_cast<double>(alphas_.size() - 1);
    if (x < core.lower) {
        // Left branch: lower(alpha) is non-decreasing; find the level where it
        // crosses x. Largest grid index with lower <= x, then interpolate.
        std::size_t i = 0;
        while (i + 1 < cuts_.size() && cuts_[i + 1].lower <= x) ++i;
        if (i + 1 >= cuts_.size()) return 1.0;
        const double a = cuts_[i].lower, b = cuts_[i + 1].lower;
        const double frac = b > a ? (x - a) / (b - a) : 1.0;
        return (static_cast<double>(i) + frac) * step;
    }
    // Right branch: upper(alpha) is non-increasing.
    std::size_t i = 0;
    while (i + 1 < cuts_.size() && cuts_[i + 1].upper >= x) ++i;
    if (i + 1 >= cuts_.size()) return 1.0;
    const double a = cuts_[i].upper, b = cuts_[i + 1].upper;
    const double frac = a > b ? (a - x) / (a - b) : 1.0;
    return (static_cast<double>(i) + frac) * step;
}

void empirical_fuzzy_number::write_csv(std::ostream& out) const {
    out << "alpha,lower,upper\n";
    out.precision(17);
    for (std::size_t i = 0; i < alphas_.size(); ++i)
        out << alphas_[i] << ',' << cuts_[i].lower << ',' << cuts_[i].upper << '\n';
}

std::string empirical_fuzzy_number::to_json() const {
    nlohmann::json cuts = nlohmann::json::array();
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
        cuts.push_back({{"alpha", alphas_[i]}, {"lower", cuts_[i].lower}, {"upper", cuts_[i].upper}});
    }
    nlohmann::json j;
    j["alpha_cuts"] = std::move(cuts);
    return j.dump();
}

} // namespace catrisk
