#pragma once

#include <cstdint>

#include "scadasim/matrix.hpp"
#include "scadasim/rng.hpp"

namespace scadasim {

using Tick = std::int64_t;

// Discrete LTI plant plus the LQG weights used to derive controller and
// estimator gains:
//   x_{t+1} = A x_t + B u_t + w_t,   w ~ N(0, Q)
//   y_t     = C x_t + v_t,           v ~ N(0, R)
struct StateSpaceModel {
    Matrix A;             // n x n state transition per tick
    Matrix B;             // n x m control input map
    Matrix C;             // p x n measurement map
    Matrix Q;             // n x n process-noise covariance
    Matrix R;             // p x p measurement-noise covariance
    Matrix W;             // n x n LQG state cost
    Matrix U;             // m x m LQG control cost (positive definite)
    double tick_seconds = 0.1;

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index p() const { return C.rows(); }

    // Throws ContractViolation on inconsistent dimensions or covariance
    // matrices that are not symmetric PSD (U additionally PD).
    void validate() const;
};

struct PlantState {
    Vector x;      // physical state; default model: [distance m, speed m/s]
    Tick t = 0;
};

// Defaults standing in for the paper's Lego car: state = [distance to
// obstacle, speed], one drive command, measured distance. All values are
// scenario-file keys, not ground truth.
StateSpaceModel default_model();

// x_{t+1} = A x_t + B u_t + w, advancing the tick. The input state is left
// untouched; process noise comes from `noise` (one draw per step).
PlantState step_plant(const StateSpaceModel& model, const PlantState& state,
                      const Vector& u, GaussianSource& noise);

// y_t = C x_t + v.
Vector measure(const StateSpaceModel& model, const PlantState& state,
               GaussianSource& noise);

}  // namespace scadasim
