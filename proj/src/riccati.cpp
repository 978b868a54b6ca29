#include "scadasim/riccati.hpp"

#include <string>

#include "scadasim/errors.hpp"

namespace scadasim {

namespace {

void check_dare_dims(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R) {
    const auto n = A.rows();
    if (A.cols() != n) throw ContractViolation("solve_dare: A must be square");
    if (B.rows() != n) throw ContractViolation("solve_dare: B rows != n");
    if (Q.rows() != n || Q.cols() != n) throw ContractViolation("solve_dare: Q must be n x n");
    if (R.rows() != B.cols() || R.cols() != B.cols()) {
        throw ContractViolation("solve_dare: R must be m x m");
    }
    if (!is_symmetric_psd(Q, 1e-9)) throw ContractViolation("solve_dare: Q must be symmetric PSD");
    if (!is_symmetric_pd(R, 0.0)) throw ContractViolation("solve_dare: R must be symmetric PD");
}

Matrix dare_step(const Matrix& A, const Matrix& B, const Matrix& Q,
                 const Matrix& R, const Matrix& P) {
    const Matrix BtP = B.transpose() * P;
    const Matrix gain = (R + BtP * B).ldlt().solve(BtP * A);
    return A.transpose() * P * A - A.transpose() * P * B * gain + Q;
}

}  // namespace

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R, const Matrix& P) {
    return (dare_step(A, B, Q, R, P) - P).norm();
}

Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const Matrix& R, const DareOptions& opts) {
    check_dare_dims(A, B, Q, R);
    Matrix P = Q;
    for (int it = 0; it < opts.max_iterations; ++it) {
        Matrix next = dare_step(A, B, Q, R, P);
        next = 0.5 * (next + next.transpose());  // keep symmetry against rounding
        const double diff = (next - P).norm();
        P = next;
        if (!all_finite(P)) {
            throw NumericError("solve_dare: iteration produced non-finite values");
        }
        if (diff < opts.convergence_tol) {
            const double res = dare_residual(A, B, Q, R, P);
            if (res > opts.residual_tol * (1.0 + P.norm())) {
                throw NumericError("solve_dare: residual check failed: " + std::to_string(res));
            }
            return P;
        }
    }
    throw NumericError("solve_dare: no convergence after " +
                       std::to_string(opts.max_iterations) + " iterations");
}

Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& W,
                const Matrix& U) {
    const Matrix P = solve_dare(A, B, W, U);
    const Matrix BtP = B.transpose() * P;
    const Matrix L = (BtP * B + U).ldlt().solve(BtP * A);
    if (B.cwiseAbs().maxCoeff() > 0.0 && spectral_radius(A - B * L) >= 1.0) {
        throw NumericError("lqr_gain: closed loop A - B L is not stable");
    }
    return L;
}

KalmanGain steady_kalman_gain(const Matrix& A, const Matrix& C,
                              const Matrix& Q, const Matrix& R) {
    const Matrix P = solve_dare(A.transpose(), C.transpose(), Q, R);
    KalmanGain g;
    g.sigma = C * P * C.transpose() + R;
    g.sigma = 0.5 * (g.sigma + g.sigma.transpose());
    if (!is_symmetric_pd(g.sigma, 0.0)) {
        throw NumericError("steady_kalman_gain: innovation covariance not PD");
    }
    g.sigma_inv = g.sigma.inverse();
    g.K = P * C.transpose() * g.sigma_inv;
    if (!all_finite(g.K)) {
        throw NumericError("steady_kalman_gain: gain not finite");
    }
    return g;
}

}  // namespace scadasim
