#pragma once

#include "catrisk/intensity.hpp"
#include "catrisk/rng.hpp"
#include "catrisk/severity.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace catrisk {

enum class resample_method { bootstrap, bootknife };

std::string_view method_name(resample_method m);
resample_method method_from_name(std::string_view name);

struct resample_spec {
    resample_method method = resample_method::bootstrap;
    int b = 500; // number of secondary samples
    std::uint64_t seed = 0;
};

// Externally generated synthetic (value, time) sample, e.g. one draw of a
// trained tabular generator. Times live on the training horizon.
struct synthetic_batch {
    std::vector<double> values;
    std::vector<double> times;
    std::string source_tag;
};

// One secondary sample. Bootstrap draws n values with replacement from the
// full sample; bootknife first deletes one uniformly chosen element and draws
// the n values from the remaining n-1.
std::vector<double> resample_once(std::span<const double> sample, resample_method method,
                                  rng_stream& rng);

struct aggregate_mle_result {
    severity_model model;
    int attempted = 0;
    int failed = 0; // secondary samples whose MLE fit was skipped
};

// Mean of the MLEs over b secondary samples. Replicate i draws from the
// stream (seed, i) on a canonically sorted copy of the input, so the result
// is invariant under permutations of the input and independent of execution
// order. Fails if more than 10% of the replicates cannot be fitted.
aggregate_mle_result aggregate_mle(std::span<const double> sample, severity_family family,
                                   const resample_spec& spec);

struct synth_estimate_result {
    severity_model severity;
    intensity_model intensity;
    int attempted = 0;
    int failed = 0;
};

// Per batch: fit the severity MLE to the values and the least-squares
// intensity to the times; return the component-wise mean parameter vectors.
// Sinusoidal phases are averaged after unwrapping to the representative
// nearest the first fitted batch, since the phase is only defined modulo one
// period.
synth_estimate_result synth_estimate(std::span<const synthetic_batch> batches,
                                     severity_family family, intensity_family int_family);

// Batch CSVs have a header with `value` and `time` columns (times in
// fractional years). The manifest is a text file listing one batch CSV path
// per line, in order; relative paths resolve against the manifest directory.
synthetic_batch load_synthetic_batch(const std::string& path);
std::vector<synthetic_batch> load_synthetic_batches(const std::string& manifest_path);

} // namespace catrisk
