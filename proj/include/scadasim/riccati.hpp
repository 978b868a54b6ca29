#pragma once

#include "scadasim/matrix.hpp"

namespace scadasim {

struct DareOptions {
    double convergence_tol = 1e-12;   // Frobenius norm of successive iterates
    double residual_tol = 1e-9;       // relative residual of the accepted P
    int max_iterations = 100000;
};

// Solve P = A'PA - A'PB(B'PB+R)^-1 B'PA + Q by fixed-point (Riccati)
// iteration from P0 = Q. Throws NumericError on divergence or if the
// converged P fails the residual check ||residual||_F <= tol*(1+||P||_F).
Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const Matrix& R, const DareOptions& opts = {});

// Residual of a candidate DARE solution (Frobenius norm).
double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R, const Matrix& P);

// State-feedback gain L = (B'PB+U)^-1 B'PA with P = solve_dare(A,B,W,U);
// the control law is u* = -L x̂. Checks spectral_radius(A - B L) < 1.
Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& W,
                const Matrix& U);

struct KalmanGain {
    Matrix K;          // n x p steady-state gain
    Matrix sigma;      // p x p innovation covariance C P C' + R
    Matrix sigma_inv;  // cached inverse, used by the detector
};

// Steady-state Kalman gain via the dual DARE P = solve_dare(A', C', Q, R);
// K = P C'(C P C' + R)^-1.
KalmanGain steady_kalman_gain(const Matrix& A, const Matrix& C,
                              const Matrix& Q, const Matrix& R);

}  // namespace scadasim
