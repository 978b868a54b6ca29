#include "scadasim/kalman.hpp"

#include "scadasim/errors.hpp"

namespace scadasim {

KalmanStep kalman_step(const Vector& x_hat, const KalmanGain& gain,
                       const StateSpaceModel& model, const Vector& u_applied,
                       const Vector& y_observed) {
    if (x_hat.size() != model.n()) {
        throw ContractViolation("kalman_step: estimate has wrong length");
    }
    if (u_applied.size() != model.m()) {
        throw ContractViolation("kalman_step: control has wrong length");
    }
    if (y_observed.size() != model.p()) {
        throw ContractViolation("kalman_step: measurement has wrong length");
    }
    KalmanStep out;
    const Vector x_pred = model.A * x_hat + model.B * u_applied;
    out.y_predicted = model.C * x_pred;
    out.residual = y_observed - out.y_predicted;
    out.x_next = x_pred + gain.K * out.residual;
    return out;
}

Vector kalman_predict(const Vector& x_hat, const StateSpaceModel& model,
                      const Vector& u_applied) {
    if (x_hat.size() != model.n() || u_applied.size() != model.m()) {
        throw ContractViolation("kalman_predict: dimension mismatch");
    }
    return model.A * x_hat + model.B * u_applied;
}

}  // namespace scadasim
