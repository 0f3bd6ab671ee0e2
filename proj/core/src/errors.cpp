#include "catrisk/errors.hpp"

namespace catrisk {

const char* errc_name(errc code) {
    switch (code) {
    case errc::missing_column: return "MissingColumn";
    case errc::unparseable_row: return "UnparseableRow";
    case errc::empty_file: return "EmptyFile";
    case errc::all_records_removed: return "AllRecordsRemoved";
    case errc::empty_split: return "EmptySplit";
    case errc::domain_error: return "DomainError";
    case errc::non_positive_value: return "NonPositiveValue";
    case errc::degenerate_sample: return "DegenerateSample";
    case errc::empty_sample: return "EmptySample";
    case errc::sample_too_small: return "SampleTooSmall";
    case errc::singular_point: return "SingularPoint";
    case errc::not_invertible: return "NotInvertible";
    case errc::non_convergence: return "NonConvergence";
    case errc::invalid_model: return "InvalidModel";
    case errc::too_many_failures: return "TooManyFailures";
    case errc::io_error: return "IoError";
    case errc::usage_error: return "UsageError";
    }
    return "UnknownError";
}

} // namespace catrisk
