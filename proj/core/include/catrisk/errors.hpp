#pragma once

#include <stdexcept>
#include <string>

namespace catrisk {

// Stable error identifiers used across the library and mapped to exit codes
// and machine-readable error reports by the CLI.
enum class errc {
    missing_column,
    unparseable_row,
    empty_file,
    all_records_removed,
    empty_split,
    domain_error,
    non_positive_value,
    degenerate_sample,
    empty_sample,
    sample_too_small,
    singular_point,
    not_invertible,
    non_convergence,
    invalid_model,
    too_many_failures,
    io_error,
    usage_error,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw error(code, what);
}

} // namespace catrisk
