#include "scadasim/rng.hpp"

#include <cmath>
#include <numbers>

#include "scadasim/errors.hpp"

namespace scadasim {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char b : label) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t child_seed(std::uint64_t root, std::string_view label) {
    return mix64(root ^ fnv1a64(label));
}

std::uint64_t SplitMix64::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
}

double SplitMix64::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix psd_sqrt(const Matrix& covariance) {
    if (covariance.rows() != covariance.cols()) {
        throw ContractViolation("psd_sqrt: covariance must be square");
    }
    if (covariance.cwiseAbs().maxCoeff() == 0.0) {
        return Matrix::Zero(covariance.rows(), covariance.cols());
    }
    Eigen::LLT<Matrix> llt(covariance);
    if (llt.info() == Eigen::Success) {
        return Matrix(llt.matrixL());
    }
    // Semidefinite or slightly indefinite from rounding: clamp eigenvalues.
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (covariance + covariance.transpose()));
    Vector ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-9 * scale) {
            throw ContractViolation("psd_sqrt: covariance is not positive semidefinite");
        }
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal();
}

GaussianSource::GaussianSource(Vector mean, Matrix covariance, std::uint64_t seed)
    : mean_(std::move(mean)),
      covariance_(std::move(covariance)),
      sqrt_(psd_sqrt(covariance_)),
      rng_(seed) {
    if (covariance_.rows() != mean_.size()) {
        throw ContractViolation("GaussianSource: mean/covariance dimension mismatch");
    }
}

GaussianSource GaussianSource::zero_mean(const Matrix& covariance, std::uint64_t seed) {
    return GaussianSource(Vector::Zero(covariance.rows()), covariance, seed);
}

Vector GaussianSource::draw() {
    Vector z(mean_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z(i) = rng_.next_normal();
    }
    ++draw_count_;
    return mean_ + sqrt_ * z;
}

void GaussianSource::set_covariance(const Matrix& covariance) {
    if (covariance.rows() != mean_.size() || covariance.cols() != mean_.size()) {
        throw ContractViolation("GaussianSource::set_covariance: dimension mismatch");
    }
    covariance_ = covariance;
    sqrt_ = psd_sqrt(covariance_);
}

}  // namespace scadasim
