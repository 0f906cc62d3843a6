#include "rabi/displaced.hpp"

#include <cmath>
#include <string>

#include "rabi/errors.hpp"
#include "rabi/special_fn.hpp"

namespace rabi {

void ModelParams::validate() const {
    if (!std::isfinite(beta) || beta < 0.0) {
        throw DomainError("ModelParams: beta must be finite and >= 0");
    }
    if (!std::isfinite(omega0_ratio) || omega0_ratio < 0.0) {
        throw DomainError("ModelParams: omega0_ratio must be finite and >= 0");
    }
}

double displacement_element(int m, int n, double alpha) {
    if (m < 0 || n < 0) {
        throw DomainError("displacement_element: indices must be non-negative");
    }
    if (!std::isfinite(alpha)) {
        throw DomainError("displacement_element: displacement must be finite");
    }
    const int hi = m >= n ? m : n;
    const int lo = m >= n ? n : m;
    const int gap = hi - lo;

    if (alpha == 0.0) {
        return gap == 0 ? 1.0 : 0.0;
    }

    const double x = alpha * alpha;
    const double lag = special::assoc_laguerre(lo, gap, x);
    if (lag == 0.0) return 0.0;

    // alpha^gap * (-1)^gap for the m < n branch combine into (sign of alpha, or its
    // negation)^gap; track the sign separately from the magnitude.
    const double log_mag = -0.5 * x + gap * std::log(std::abs(alpha)) +
                           0.5 * special::log_factorial_ratio(lo, hi) + std::log(std::abs(lag));
    bool negative = lag < 0.0;
    const bool odd_gap = (gap % 2) != 0;
    if (odd_gap && alpha < 0.0) negative = !negative;
    if (odd_gap && m < n) negative = !negative;
    const double mag = std::exp(log_mag);
    return negative ? -mag : mag;
}

double displaced_overlap(int m, int n, double beta) {
    if (!(beta >= 0.0)) {
        throw DomainError("displaced_overlap: beta must be >= 0");
    }
    return displacement_element(m, n, 2.0 * beta);
}

Eigen::VectorXd displaced_fock_coeffs(int n_level, double displacement, int dim) {
    if (n_level < 0) {
        throw DomainError("displaced_fock_coeffs: level must be non-negative");
    }
    if (dim <= n_level) {
        throw DomainError("displaced_fock_coeffs: dim must exceed the level index");
    }
    // Work in a padded space so the ladder steps never lose weight at the edge.
    const int work = dim + n_level + 1;
    Eigen::VectorXd c(work);
    c(0) = std::exp(-0.5 * displacement * displacement);
    for (int k = 1; k < work; ++k) {
        c(k) = c(k - 1) * displacement / std::sqrt(static_cast<double>(k));
    }
    // D(d) a^dag D(d)^dag = a^dag - d, so D(d)|j+1> = (a^dag - d) D(d)|j> / sqrt(j+1).
    Eigen::VectorXd next(work);
    for (int j = 0; j < n_level; ++j) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(j + 1));
        next(0) = -displacement * c(0) * inv;
        for (int k = 1; k < work; ++k) {
            next(k) = (std::sqrt(static_cast<double>(k)) * c(k - 1) - displacement * c(k)) * inv;
        }
        c.swap(next);
    }
    Eigen::VectorXd out = c.head(dim);
    const double deficit = 1.0 - out.squaredNorm();
    if (deficit > 1e-8) {
        throw TruncationError("displaced_fock_coeffs: dim " + std::to_string(dim) +
                              " too small for level " + std::to_string(n_level) +
                              " (norm deficit " + std::to_string(deficit) + ")");
    }
    return out;
}

OverlapTable::OverlapTable(int max_n, double beta)
    : max_n_(max_n), beta_(beta) {
    if (max_n < 0) {
        throw DomainError("OverlapTable: max_n must be non-negative");
    }
    if (!(beta >= 0.0)) {
        throw DomainError("OverlapTable: beta must be >= 0");
    }
    const int size = max_n + 1;
    entries_.resize(size, size);
    for (int m = 0; m < size; ++m) {
        for (int n = 0; n <= m; ++n) {
            const double v = displaced_overlap(m, n, beta);
            entries_(m, n) = v;
            entries_(n, m) = ((m - n) % 2 == 0) ? v : 0.0 - v;
        }
    }
}

OverlapTable overlap_table(int max_n, double beta) {
    return OverlapTable(max_n, beta);
}

} // namespace rabi
