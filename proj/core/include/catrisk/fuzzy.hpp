#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace catrisk {

struct interval {
    double lower = 0.0;
    double upper = 0.0;
};

// Sample quantile with linear interpolation of order statistics (type 7).
// `sorted` must be ascending; order lies in [0, 1].
double quantile_type7(std::span<const double> sorted, double order);

// LR fuzzy number represented by its alpha-cuts on a uniform grid over
// [0, 1]. Built from simulated claim-process values: the alpha-cut is the
// central quantile interval [q_{alpha/2}, q_{1-alpha/2}], so the core is the
// sample median and the support is [min, max]. Cuts are nested by
// construction since the quantile function is monotone in its order.
class empirical_fuzzy_number {
public:
    static empirical_fuzzy_number from_sample(std::span<const double> values, int grid_size);

    // Cut at any alpha in [0, 1]: linear interpolation between grid cuts,
    // exact at grid points.
    interval alpha_cut(double alpha) const;

    // Membership grade sup{alpha : x in cut(alpha)}, linear between grid
    // levels; 0 outside the support, 1 on the core.
    double membership(double x) const;

    const std::vector<double>& alpha_grid() const noexcept { return alphas_; }
    const std::vector<interval>& cuts() const noexcept { return cuts_; }
    interval support() const { return cuts_.front(); }
    interval core() const { return cuts_.back(); }

    // Rows of (alpha, lower, upper) — plot-ready.
    void write_csv(std::ostream& out) const;
    std::string to_json() const;

private:
    std::vector<double> alphas_;
    std::vector<interval> cuts_;
};

} // namespace catrisk
