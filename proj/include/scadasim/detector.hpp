#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "scadasim/matrix.hpp"

namespace scadasim {

struct DetectorConfig {
    double threshold = 0.0;  // on g_t; produced by calibrate_threshold
    int window = 5;          // consecutive exceedances tolerated before alerting
    int gwindow = 10;        // residuals summed into g_t

    void validate() const;
};

// χ² detector state: g_t is the Mahalanobis sum of the last gwindow
// innovations, maintained incrementally over a ring.
class DetectorState {
 public:
    DetectorState(const Matrix& sigma_inverse, int gwindow);

    // Push residual r, returns updated g_t = Σ r_k' Σ⁻¹ r_k over the ring.
    double gt_update(const Vector& r);

    // Consecutive-exceedance bookkeeping, exactly Algorithm 1 of the
    // fault/attack separation logic:
    //   if g_t >= threshold: risk += 1; if risk > window: alert += 1
    //   else: risk = 0
    void alert_step(const DetectorConfig& config, double g_t);

    // Recompute g_t from the ring contents (test oracle for the
    // incremental path).
    double gt_from_scratch() const;

    double g() const { return g_; }
    std::int64_t risk() const { return risk_; }
    std::int64_t alert() const { return alert_; }
    const Matrix& sigma_inverse() const { return sigma_inverse_; }

 private:
    Matrix sigma_inverse_;
    int gwindow_;
    std::deque<double> terms_;   // r' Σ⁻¹ r per remembered residual
    double g_ = 0.0;
    std::int64_t risk_ = 0;
    std::int64_t alert_ = 0;
};

// Empirical (1 - target_fp) quantile of an attack-free g_t sample.
// Requires samples.size() >= 100 / target_fp, else throws ContractViolation
// (insufficient data to place the quantile).
double calibrate_threshold(std::vector<double> gt_samples, double target_fp);

}  // namespace scadasim
