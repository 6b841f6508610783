#include "tokenlens/stats.hpp"

#include <algorithm>
#include <cmath>

namespace tokenlens {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) return sorted.front();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

AggregateStats aggregate(const std::vector<double>& values) {
    if (values.empty()) throw EmptyInput("aggregate over empty value list");

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    AggregateStats stats;
    stats.count = sorted.size();
    double sum = 0;
    for (double v : sorted) sum += v;
    stats.mean = sum / static_cast<double>(stats.count);
    if (stats.count > 1) {
        double ss = 0;
        for (double v : sorted) {
            const double d = v - stats.mean;
            ss += d * d;
        }
        stats.std_dev = std::sqrt(ss / static_cast<double>(stats.count - 1));
    }
    stats.min = sorted.front();
    stats.max = sorted.back();
    stats.q25 = quantile_sorted(sorted, 0.25);
    stats.median = quantile_sorted(sorted, 0.50);
    stats.q75 = quantile_sorted(sorted, 0.75);
    return stats;
}

double time_scaled_tokens(const InferenceRecord& record) {
    if (!(record.wall_seconds > 0)) throw ZeroDuration("wall time is not positive");
    return static_cast<double>(record.total_tokens) / record.wall_seconds;
}

double growth_rate(const InferenceRecord& test, const InferenceRecord& baseline) {
    if (baseline.total_tokens == 0) throw ZeroBaseline("baseline has zero tokens");
    return static_cast<double>(test.total_tokens - baseline.total_tokens) /
           static_cast<double>(baseline.total_tokens);
}

NormalizedTokens normalized_tokens(const InferenceRecord& record,
                                   const ComplexityProfile& profile, ScoreMode mode) {
    NormalizedTokens out;
    if (record.total_tokens == 0) return out;
    const double score = complexity_score(profile, mode);
    if (!(score > 0)) throw ZeroComplexity("complexity score is not positive");
    if (profile.loc.code == 0) throw ZeroLines("unit has no code lines");
    out.per_complexity = static_cast<double>(record.total_tokens) / score;
    out.per_line =
        static_cast<double>(record.total_tokens) / static_cast<double>(profile.loc.code);
    return out;
}

}  // namespace tokenlens
