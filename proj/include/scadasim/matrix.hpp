#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

namespace scadasim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Build a matrix from row-major entries (the layout used by scenario files).
Matrix matrix_from_rows(Eigen::Index rows, Eigen::Index cols,
                        const std::vector<double>& entries);

// Row-major flattening, inverse of matrix_from_rows.
std::vector<double> matrix_to_rows(const Matrix& m);

bool is_symmetric(const Matrix& m, double tol = 1e-9);

// Symmetric within tol and all eigenvalues >= -tol.
bool is_symmetric_psd(const Matrix& m, double tol = 1e-9);

// Symmetric and all eigenvalues strictly positive.
bool is_symmetric_pd(const Matrix& m, double tol = 1e-9);

bool all_finite(const Matrix& m);

// Spectral radius estimate via power iteration on M^T*M pairs; used for the
// closed-loop stability invariants. Accurate to ~1e-6 for the small systems
// handled here.
double spectral_radius(const Matrix& m, int iterations = 10000);

}  // namespace scadasim
