#include "scadasim/detector.hpp"

#include <algorithm>
#include <cmath>

#include "scadasim/errors.hpp"

namespace scadasim {

void DetectorConfig::validate() const {
    if (threshold <= 0.0) throw ContractViolation("detector: threshold must be > 0");
    if (window < 1) throw ContractViolation("detector: window must be >= 1");
    if (gwindow < 1) throw ContractViolation("detector: gwindow must be >= 1");
}

DetectorState::DetectorState(const Matrix& sigma_inverse, int gwindow)
    : sigma_inverse_(sigma_inverse), gwindow_(gwindow) {
    if (gwindow < 1) throw ContractViolation("detector: gwindow must be >= 1");
    if (sigma_inverse_.rows() != sigma_inverse_.cols()) {
        throw ContractViolation("detector: sigma_inverse must be square");
    }
}

double DetectorState::gt_update(const Vector& r) {
    if (r.size() != sigma_inverse_.rows()) {
        throw ContractViolation("detector: residual has wrong length");
    }
    const double term = r.dot(sigma_inverse_ * r);
    terms_.push_back(term);
    g_ += term;
    if (static_cast<int>(terms_.size()) > gwindow_) {
        g_ -= terms_.front();
        terms_.pop_front();
    }
    // Guard against drift from incremental updates over very long runs.
    if (g_ < 0.0) g_ = 0.0;
    return g_;
}

void DetectorState::alert_step(const DetectorConfig& config, double g_t) {
    if (g_t >= config.threshold) {
        ++risk_;
        if (risk_ > config.window) {
            ++alert_;
        }
    } else {
        risk_ = 0;
    }
}

double DetectorState::gt_from_scratch() const {
    double sum = 0.0;
    for (double term : terms_) sum += term;
    return sum;
}

double calibrate_threshold(std::vector<double> gt_samples, double target_fp) {
    if (target_fp <= 0.0 || target_fp >= 1.0) {
        throw ContractViolation("calibrate_threshold: target_fp must lie in (0,1)");
    }
    const double needed = 100.0 / target_fp;
    if (static_cast<double>(gt_samples.size()) < needed) {
        throw ContractViolation("calibrate_threshold: insufficient data, need >= 100/target_fp samples");
    }
    std::sort(gt_samples.begin(), gt_samples.end());
    const auto n = static_cast<double>(gt_samples.size());
    auto idx = static_cast<std::size_t>(std::ceil((1.0 - target_fp) * n)) - 1;
    idx = std::min(idx, gt_samples.size() - 1);
    return gt_samples[idx];
}

}  // namespace scadasim
