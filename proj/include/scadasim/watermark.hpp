#pragma once

#include <cstdint>

#include "scadasim/matrix.hpp"
#include "scadasim/rng.hpp"
#include "scadasim/state_space.hpp"

namespace scadasim {

enum class WatermarkMode { kDisabled, kStationary, kNonStationary };

struct WatermarkConfig {
    WatermarkMode mode = WatermarkMode::kStationary;
    Matrix base_covariance;        // m x m
    double variance_scale_low = 0.5;    // non-stationary only
    double variance_scale_high = 2.0;
    double switch_probability = 0.02;   // per tick, non-stationary only
    std::uint64_t seed = 0;

    void validate() const;
};

// Owned by the controller; evolves one draw per command tick.
class WatermarkState {
 public:
    explicit WatermarkState(const WatermarkConfig& config);

    // Next authentication signal Δu. Disabled -> exact zero vector.
    // Stationary -> N(0, base_covariance). Non-stationary -> with
    // switch_probability first rescale the covariance by a uniform draw
    // from [scale_low, scale_high], then sample. Per-call RNG consumption
    // is fixed per mode, so sequences are reproducible by construction.
    Vector next(const WatermarkConfig& config);

    const Matrix& current_covariance() const { return current_covariance_; }
    Tick tick() const { return tick_; }

 private:
    Matrix current_covariance_;
    GaussianSource rng_;
    SplitMix64 switch_rng_;
    Tick tick_ = 0;
};

// u* + Δu (lengths must match). The detector is informed of Δu implicitly:
// the controller feeds the full watermarked command to its own filter.
Vector apply_watermark(const Vector& u_star, const Vector& delta_u);

}  // namespace scadasim
