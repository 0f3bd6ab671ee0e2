#pragma once

#include <string>
#include <utility>
#include <vector>

namespace catrisk {

// One catastrophic claim: monetary value (in thousands of currency units,
// inflation-adjusted upstream) and occurrence time in fractional years since
// the dataset's epoch start.
struct claim_record {
    double value = 0.0;
    double time = 0.0;
};

// Ordered claim history. Records are sorted by time and all times lie in
// [0, horizon]. epoch_start is the calendar year anchoring time 0.
struct claim_dataset {
    std::vector<claim_record> records;
    int epoch_start = 0;
    double horizon = 0.0;

    std::size_t size() const noexcept { return records.size(); }
    std::vector<double> values() const;
    std::vector<double> times() const;
    // Sum of claim values with time <= t.
    double aggregate_value(double t) const;
};

// Day counts convert to fractional years at 365.25 days per year.
inline constexpr double days_per_year = 365.25;

double years_from_days(double days);

// Parse a headered CSV of claims. Dates are ISO 8601 (YYYY-MM-DD); times are
// measured from Jan 1 of epoch_start at day resolution. Records come back
// sorted by time; horizon is the latest observed time.
claim_dataset parse_claims_csv(const std::string& path,
                               const std::string& value_column,
                               const std::string& date_column,
                               int epoch_start);

// Drop non-material claims (value <= 0), then remove the
// ceil(trim_fraction * m) largest of the m survivors. Ties on value are
// broken by removing later-time records first. Time order is preserved.
claim_dataset preprocess(const claim_dataset& ds, double trim_fraction);

// Split at the boundary between split_year-1 and split_year. Train keeps the
// original anchor with horizon equal to the boundary; test is re-anchored so
// its time 0 is the boundary.
std::pair<claim_dataset, claim_dataset> split_train_test(const claim_dataset& ds,
                                                         int split_year);

} // namespace catrisk
