#pragma once

#include <stdexcept>
#include <vector>

#include "tokenlens/complexity.hpp"
#include "tokenlens/gateway.hpp"

namespace tokenlens {

/// Descriptive statistics in the table layout used by the reports.
struct AggregateStats {
    std::size_t count = 0;
    double mean = 0;
    double std_dev = 0;  // sample std, n-1 denominator; 0 when count == 1
    double min = 0;
    double q25 = 0;
    double median = 0;
    double q75 = 0;
    double max = 0;
};

struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroDuration : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroBaseline : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroLines : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizedTokens {
    double per_complexity = 0;
    double per_line = 0;
};

/// Quartiles by linear interpolation between closest ranks (the common
/// "type 7" convention); std with n-1 denominator.
AggregateStats aggregate(const std::vector<double>& values);

/// total_tokens / wall_seconds.
double time_scaled_tokens(const InferenceRecord& record);

/// (test - baseline) / baseline over total token counts.
double growth_rate(const InferenceRecord& test, const InferenceRecord& baseline);

NormalizedTokens normalized_tokens(const InferenceRecord& record,
                                   const ComplexityProfile& profile, ScoreMode mode);

}  // namespace tokenlens
