#include "catrisk/claims.hpp"

#include "catrisk/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace catrisk {

std::vector<double> claim_dataset::values() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.value);
    return out;
}

std::vector<double> claim_dataset::times() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.time);
    return out;
}

double claim_dataset::aggregate_value(double t) const {
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.time > t) break;
        sum += r.value;
    }
    return sum;
}

double years_from_days(double days) { return days / days_per_year; }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim_ws(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim_ws(s);
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && t.size() > 0;
}

// ISO 8601 calendar date -> days since Jan 1 of epoch_start.
bool parse_iso_date(const std::string& s, int epoch_start, long& days_out) {
    const std::string t = trim_ws(s);
    int y = 0;
    unsigned m = 0, d = 0;
    if (t.size() != 10 || t[4] != '-' || t[7] != '-') return false;
    auto num = [&](std::size_t pos, std::size_t len, auto& out) {
        auto [ptr, ec] = std::from_chars(t.data() + pos, t.data() + pos + len, out);
        return ec == std::errc() && ptr == t.data() + pos + len;
    };
    if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return false;
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) return false;
    const std::chrono::year_month_day epoch{std::chrono::year{epoch_start},
                                            std::chrono::month{1}, std::chrono::day{1}};
    days_out = (std::chrono::sys_days{ymd} - std::chrono::sys_days{epoch}).count();
    return true;
}

} // namespace

claim_dataset parse_claims_csv(const std::string& path, const std::string& value_column,
                               const std::string& date_column, int epoch_start) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "cannot open claims CSV: " + path);

    std::string line;
    if (!std::getline(in, line)) raise(errc::empty_file, "empty claims CSV: " + path);

    const auto header = split_csv_line(line);
    std::size_t value_idx = header.size(), date_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = trim_ws(header[i]);
        if (name == value_column) value_idx = i;
        if (name == date_column) date_idx = i;
    }
    if (value_idx == header.size())
        raise(errc::missing_column, "missing value column '" + value_column + "' in " + path);
    if (date_idx == header.size())
        raise(errc::missing_column, "missing date column '" + date_column + "' in " + path);

    claim_dataset ds;
    ds.epoch_start = epoch_start;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim_ws(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() <= std::max(value_idx, date_idx))
            raise(errc::unparseable_row,
                  "row " + std::to_string(row) + ": expected at least " +
                      std::to_string(std::max(value_idx, date_idx) + 1) + " columns");
        double value = 0.0;
        long days = 0;
        if (!parse_double(fields[value_idx], value))
            raise(errc::unparseable_row,
                  "row " + std::to_string(row) + ": bad value '" + fields[value_idx] + "'");
        if (!parse_iso_date(fields[date_idx], epoch_start, days))
            raise(errc::unparseable_row,
                  "row " + std::to_string(row) + ": bad date '" + fields[date_idx] + "'");
        if (days < 0)
            raise(errc::unparseable_row,
                  "row " + std::to_string(row) + ": date precedes epoch start");
        ds.records.push_back({value, years_from_days(static_cast<double>(days))});
    }
    if (ds.records.empty()) raise(errc::empty_file, "no data rows in claims CSV: " + path);

    std::stable_sort(ds.records.begin(), ds.records.end(),
                     [](const claim_record& a, const claim_record& b) { return a.time < b.time; });
    ds.horizon = ds.records.back().time;
    return ds;
}

claim_dataset preprocess(const claim_dataset& ds, double trim_fraction) {
    if (!(trim_fraction >= 0.0 && trim_fraction < 1.0))
        raise(errc::domain_error, "trim_fraction must lie in [0, 1)");

    std::vector<claim_record> kept;
    kept.reserve(ds.records.size());
    for (const auto& r : ds.records)
        if (r.value > 0.0) kept.push_back(r);
    if (kept.empty()) raise(errc::all_records_removed, "no material claims survive preprocessing");

    const auto m = kept.size();
    const auto k = static_cast<std::size_t>(std::ceil(trim_fraction * static_cast<double>(m)));
    if (k >= m) raise(errc::all_records_removed, "trim removes every material claim");

    if (k > 0) {
        // Rank survivors by (value desc, time desc): equal values drop the
        // later occurrence first.
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (kept[a].value != kept[b].value) return kept[a].value > kept[b].value;
            return kept[a].time > kept[b].time;
        });
        std::vector<bool> drop(m, false);
        for (std::size_t i = 0; i < k; ++i) drop[order[i]] = true;
        std::vector<claim_record> trimmed;
        trimmed.reserve(m - k);
        for (std::size_t i = 0; i < m; ++i)
            if (!drop[i]) trimmed.push_back(kept[i]);
        kept = std::move(trimmed);
    }

    claim_dataset out;
    out.records = std::move(kept);
    out.epoch_start = ds.epoch_start;
    out.horizon = ds.horizon;
    return out;
}

std::pair<claim_dataset, claim_dataset> split_train_test(const claim_dataset& ds, int split_year) {
    const double boundary = static_cast<double>(split_year - ds.epoch_start);
    if (boundary <= 0.0 || boundary > ds.horizon)
        raise(errc::domain_error, "split year falls outside the data range");

    claim_dataset train, test;
    train.epoch_start = ds.epoch_start;
    train.horizon = boundary;
    test.epoch_start = split_year;
    test.horizon = ds.horizon - boundary;
    for (const auto& r : ds.records) {
        if (r.time < boundary)
            train.records.push_back(r);
        else
            test.records.push_back({r.value, r.time - boundary});
    }
    if (train.records.empty() || test.records.empty())
        raise(errc::empty_split, "train/test split leaves an empty side");
    return {std::move(train), std::move(test)};
}

} // namespace catrisk
