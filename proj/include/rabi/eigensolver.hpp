// eigensolver.hpp - Dense real symmetric eigendecomposition by cyclic Jacobi rotations.

#pragma once

#include <Eigen/Dense>

namespace rabi {

struct JacobiOptions {
    int max_sweeps{60};
    // Converged once the off-diagonal Frobenius norm drops below tol * ||A||_F.
    double tol{1e-15};
};

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column j pairs with values(j); largest |component| is positive
    int sweeps{0};
};

// Deterministic for identical input. Throws std::invalid_argument for non-square or
// non-symmetric input and ConvergenceError when max_sweeps is exhausted.
EigenPairs eigendecompose(const Eigen::MatrixXd& matrix, const JacobiOptions& options = {});

// max_j ||A v_j - lambda_j v_j||_2
double max_residual(const Eigen::MatrixXd& matrix, const EigenPairs& pairs);

} // namespace rabi
