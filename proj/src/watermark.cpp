#include "scadasim/watermark.hpp"

#include "scadasim/errors.hpp"

namespace scadasim {

void WatermarkConfig::validate() const {
    if (base_covariance.rows() != base_covariance.cols()) {
        throw ContractViolation("watermark: base_covariance must be square");
    }
    if (!is_symmetric_psd(base_covariance)) {
        throw ContractViolation("watermark: base_covariance must be symmetric PSD");
    }
    if (mode == WatermarkMode::kNonStationary) {
        if (variance_scale_low <= 0.0 || variance_scale_high < variance_scale_low) {
            throw ContractViolation("watermark: variance scale range must satisfy 0 < low <= high");
        }
        if (switch_probability < 0.0 || switch_probability > 1.0) {
            throw ContractViolation("watermark: switch_probability must lie in [0,1]");
        }
    }
}

WatermarkState::WatermarkState(const WatermarkConfig& config)
    : current_covariance_(config.base_covariance),
      rng_(GaussianSource::zero_mean(config.base_covariance,
                                     child_seed(config.seed, "watermark-noise"))),
      switch_rng_(child_seed(config.seed, "watermark-switch")) {
    config.validate();
}

Vector WatermarkState::next(const WatermarkConfig& config) {
    ++tick_;
    switch (config.mode) {
        case WatermarkMode::kDisabled:
            return Vector::Zero(config.base_covariance.rows());
        case WatermarkMode::kStationary:
            return rng_.draw();
        case WatermarkMode::kNonStationary: {
            if (switch_rng_.next_uniform() < config.switch_probability) {
                const double s = config.variance_scale_low +
                                 (config.variance_scale_high - config.variance_scale_low) *
                                     switch_rng_.next_uniform();
                current_covariance_ = s * config.base_covariance;
                rng_.set_covariance(current_covariance_);
            }
            return rng_.draw();
        }
    }
    throw ContractViolation("watermark: unknown mode");
}

Vector apply_watermark(const Vector& u_star, const Vector& delta_u) {
    if (u_star.size() != delta_u.size()) {
        throw ContractViolation("apply_watermark: length mismatch");
    }
    return u_star + delta_u;
}

}  // namespace scadasim
