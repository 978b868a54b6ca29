#pragma once

#include "scadasim/riccati.hpp"
#include "scadasim/state_space.hpp"

namespace scadasim {

struct KalmanStep {
    Vector x_next;      // updated estimate x̂' = x̄ + K r
    Vector y_predicted; // ŷ = C x̄
    Vector residual;    // r = y - ŷ (the innovation fed to the detector)
};

// One combined predict+update with the steady-state gain:
//   x̄ = A x̂ + B u,  ŷ = C x̄,  r = y - ŷ,  x̂' = x̄ + K r
KalmanStep kalman_step(const Vector& x_hat, const KalmanGain& gain,
                       const StateSpaceModel& model, const Vector& u_applied,
                       const Vector& y_observed);

// Prediction only (used when a sampling tick carries no measurement).
Vector kalman_predict(const Vector& x_hat, const StateSpaceModel& model,
                      const Vector& u_applied);

}  // namespace scadasim
