#pragma once

#include <cstdint>
#include <string_view>

#include "scadasim/matrix.hpp"

namespace scadasim {

// SplitMix64 (Vigna's public-domain mixer). Chosen over std engines so that
// traces are bit-reproducible across platforms and standard libraries.
//
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z^(z>>30))*0xBF58476D1CE4E5B9
//   z = (z^(z>>27))*0x94D049BB133111EB; return z^(z>>31)
class SplitMix64 {
 public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_uniform();

    // Standard normal via Box-Muller (cosine branch only, no caching):
    // every draw consumes exactly two 64-bit outputs, u1 in (0,1], u2 in [0,1).
    double next_normal();

 private:
    std::uint64_t state_;
};

// One application of the SplitMix64 output scrambler (stateless).
std::uint64_t mix64(std::uint64_t z);

// FNV-1a over the label bytes.
std::uint64_t fnv1a64(std::string_view label);

// Seed split scheme: child = mix64(root ^ fnv1a64(label)). Every random
// stream in a scenario is derived this way, so streams stay stable when
// unrelated nodes are added or reordered.
std::uint64_t child_seed(std::uint64_t root, std::string_view label);

// Seeded multivariate Gaussian stream. Draws are mean + S*z with S a
// Cholesky-like square root of the covariance (zero covariance gives the
// mean exactly). Deterministic per (seed, draw sequence).
class GaussianSource {
 public:
    GaussianSource(Vector mean, Matrix covariance, std::uint64_t seed);

    // Convenience: scalar/vector zero-mean source.
    static GaussianSource zero_mean(const Matrix& covariance, std::uint64_t seed);

    Vector draw();

    std::int64_t draw_count() const { return draw_count_; }
    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return covariance_; }

    // Replace the covariance (used by the non-stationary watermark);
    // the underlying generator state is untouched.
    void set_covariance(const Matrix& covariance);

 private:
    Vector mean_;
    Matrix covariance_;
    Matrix sqrt_;         // factor S with S*S^T == covariance
    SplitMix64 rng_;
    std::int64_t draw_count_ = 0;
};

// Square root factor of a symmetric PSD matrix: LLT when positive definite,
// eigendecomposition with tiny-negative clamping otherwise.
Matrix psd_sqrt(const Matrix& covariance);

}  // namespace scadasim
