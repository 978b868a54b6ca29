#pragma once

#include <vector>

#include "scadasim/round.hpp"

namespace scadasim {

enum class SampleFlag { kExceedance, kAlert };

struct MetricsReport {
    std::string scenario;
    double detection_ratio = 0.0;
    double avg_detection_time_seconds = 0.0;  // NaN when nothing was detected
    double median_detection_time_seconds = 0.0;
    double fn_ratio = 0.0;
    double fp_ratio = 0.0;
    int rounds = 0;          // completed rounds contributing samples
    int aborted_rounds = 0;
};

// Per-sample "detected" flag of a trace row: threshold exceedance (risk was
// incremented this row) or an alert increment, per the configured meaning.
bool row_flagged(const TraceRow& row, SampleFlag flag);

// Eq.-style per-sample ratios pooled over completed rounds. SA counts
// detector samples at ticks >= attack_start, SN the samples before it.
// Throws ContractViolation when the denominator population is empty.
double fn_ratio(const std::vector<RoundResult>& results,
                SampleFlag flag = SampleFlag::kExceedance);
double fp_ratio(const std::vector<RoundResult>& results,
                SampleFlag flag = SampleFlag::kExceedance);

// Round-level detection: an alert increment anywhere in
// [attack_start, round end]. Detection time = (first such tick -
// attack_start) * tick_seconds.
MetricsReport detection_metrics(const std::vector<RoundResult>& results,
                                const ScenarioConfig& config,
                                SampleFlag flag = SampleFlag::kExceedance);

}  // namespace scadasim
