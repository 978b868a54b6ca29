#include "scadasim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "scadasim/errors.hpp"

namespace scadasim {

bool row_flagged(const TraceRow& row, SampleFlag flag) {
    // risk resets to zero on any row below threshold, so risk > 0 is exactly
    // "this row exceeded".
    if (flag == SampleFlag::kExceedance) return row.risk > 0;
    return false;  // alert flags need the previous row; handled in the loops
}

namespace {

struct SampleCounts {
    std::int64_t sa = 0;       // post-attack samples
    std::int64_t ad_post = 0;  // flagged post-attack
    std::int64_t sn = 0;       // pre-attack samples
    std::int64_t ad_pre = 0;   // flagged pre-attack
};

SampleCounts count_samples(const std::vector<RoundResult>& results, SampleFlag flag) {
    SampleCounts counts;
    for (const auto& round : results) {
        if (round.aborted) continue;
        std::int64_t prev_alert = 0;
        for (const auto& row : round.gt_trace) {
            const bool flagged = (flag == SampleFlag::kExceedance)
                                     ? row.risk > 0
                                     : row.alert > prev_alert;
            prev_alert = row.alert;
            const bool post = round.attack_start_tick >= 0 && row.t >= round.attack_start_tick;
            if (post) {
                ++counts.sa;
                if (flagged) ++counts.ad_post;
            } else {
                ++counts.sn;
                if (flagged) ++counts.ad_pre;
            }
        }
    }
    return counts;
}

std::optional<Tick> first_post_attack_alert(const RoundResult& round) {
    if (round.attack_start_tick < 0) return std::nullopt;
    std::int64_t prev_alert = 0;
    for (const auto& row : round.gt_trace) {
        const bool increment = row.alert > prev_alert;
        prev_alert = row.alert;
        if (increment && row.t >= round.attack_start_tick) return row.t;
    }
    return std::nullopt;
}

}  // namespace

double fn_ratio(const std::vector<RoundResult>& results, SampleFlag flag) {
    const SampleCounts c = count_samples(results, flag);
    if (c.sa == 0) {
        throw ContractViolation("fn_ratio: no post-attack samples (SA = 0)");
    }
    return static_cast<double>(c.sa - c.ad_post) / static_cast<double>(c.sa);
}

double fp_ratio(const std::vector<RoundResult>& results, SampleFlag flag) {
    const SampleCounts c = count_samples(results, flag);
    if (c.sn == 0) {
        throw ContractViolation("fp_ratio: no pre-attack samples (SN = 0)");
    }
    return static_cast<double>(c.ad_pre) / static_cast<double>(c.sn);
}

MetricsReport detection_metrics(const std::vector<RoundResult>& results,
                                const ScenarioConfig& config, SampleFlag flag) {
    MetricsReport report;
    report.scenario = config.name;

    int completed = 0;
    int detected = 0;
    std::vector<double> times;
    for (const auto& round : results) {
        if (round.aborted) {
            ++report.aborted_rounds;
            continue;
        }
        ++completed;
        if (const auto tick = first_post_attack_alert(round)) {
            ++detected;
            times.push_back(static_cast<double>(*tick - round.attack_start_tick) *
                            config.plant.tick_seconds);
        }
    }
    if (completed == 0) {
        throw ContractViolation("detection_metrics: zero completed rounds");
    }
    report.rounds = completed;
    report.detection_ratio = static_cast<double>(detected) / static_cast<double>(completed);
    if (times.empty()) {
        report.avg_detection_time_seconds = std::numeric_limits<double>::quiet_NaN();
        report.median_detection_time_seconds = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sum = 0.0;
        for (double t : times) sum += t;
        report.avg_detection_time_seconds = sum / static_cast<double>(times.size());
        std::sort(times.begin(), times.end());
        const std::size_t mid = times.size() / 2;
        report.median_detection_time_seconds =
            times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    }

    const SampleCounts c = count_samples(results, flag);
    report.fn_ratio = c.sa > 0
                          ? static_cast<double>(c.sa - c.ad_post) / static_cast<double>(c.sa)
                          : std::numeric_limits<double>::quiet_NaN();
    report.fp_ratio = c.sn > 0
                          ? static_cast<double>(c.ad_pre) / static_cast<double>(c.sn)
                          : std::numeric_limits<double>::quiet_NaN();
    return report;
}

}  // namespace scadasim
