#include "rabi/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    const Eigen::Index n = a.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            sum += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(2.0 * sum);
}

// Zeroes a(p,q) with the rotation of Golub & Van Loan (Alg. 8.4.1), updating a and v in place.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

} // namespace

EigenPairs eigendecompose(const Eigen::MatrixXd& matrix, const JacobiOptions& options) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("eigendecompose: matrix must be square");
    }
    const Eigen::Index n = matrix.rows();
    const double scale = matrix.norm();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            if (std::abs(matrix(i, j) - matrix(j, i)) > 1e-14 * std::max(scale, 1.0)) {
                throw std::invalid_argument("eigendecompose: matrix is not symmetric");
            }
        }
    }

    Eigen::MatrixXd a = matrix;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double target = options.tol * scale;

    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
        if (sweep == options.max_sweeps) {
            throw ConvergenceError("eigendecompose: no convergence after " +
                                   std::to_string(options.max_sweeps) + " sweeps");
        }
        ++sweep;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                // Skip entries already negligible against both diagonal partners.
                const double apq = std::abs(a(p, q));
                if (apq == 0.0) continue;
                if (sweep > 3 && apq * 1e17 <= std::abs(a(p, p)) && apq * 1e17 <= std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotate(a, v, p, q);
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

    EigenPairs out;
    out.sweeps = sweep;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.values(j) = a(src, src);
        Eigen::VectorXd col = v.col(src);
        Eigen::Index big = 0;
        col.cwiseAbs().maxCoeff(&big);
        if (col(big) < 0.0) col = -col;
        out.vectors.col(j) = col;
    }
    return out;
}

double max_residual(const Eigen::MatrixXd& matrix, const EigenPairs& pairs) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < pairs.values.size(); ++j) {
        const Eigen::VectorXd r = matrix * pairs.vectors.col(j) - pairs.values(j) * pairs.vectors.col(j);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

} // namespace rabi
