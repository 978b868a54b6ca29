#include "scadasim/matrix.hpp"

#include <cmath>
#include <complex>

#include "scadasim/errors.hpp"

namespace scadasim {

Matrix matrix_from_rows(Eigen::Index rows, Eigen::Index cols,
                        const std::vector<double>& entries) {
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
        throw ContractViolation("matrix_from_rows: entries.size() != rows*cols");
    }
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = entries[static_cast<std::size_t>(r * cols + c)];
        }
    }
    return m;
}

std::vector<double> matrix_to_rows(const Matrix& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out.push_back(m(r, c));
        }
    }
    return out;
}

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_symmetric_psd(const Matrix& m, double tol) {
    if (!is_symmetric(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    return es.eigenvalues().minCoeff() >= -tol;
}

bool is_symmetric_pd(const Matrix& m, double tol) {
    if (!is_symmetric(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    return es.eigenvalues().minCoeff() > tol;
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

double spectral_radius(const Matrix& m, int iterations) {
    if (m.rows() != m.cols()) {
        throw ContractViolation("spectral_radius: matrix must be square");
    }
    if (m.rows() == 0) return 0.0;
    // Power iteration on the possibly non-symmetric matrix. Track the growth
    // rate of ||M^k v||^(1/k); restarts are unnecessary at these sizes.
    Vector v = Vector::Ones(m.rows());
    v.normalize();
    double rho = 0.0;
    for (int i = 0; i < iterations; ++i) {
        Vector w = m * v;
        const double norm = w.norm();
        if (norm < 1e-300) return 0.0;  // nilpotent-ish
        rho = norm;
        v = w / norm;
    }
    return rho;
}

}  // namespace scadasim
