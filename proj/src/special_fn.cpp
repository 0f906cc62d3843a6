#include "rabi/special_fn.hpp"

#include <cmath>
#include <string>

#include "rabi/errors.hpp"

namespace rabi::special {

double laguerre(int n, double x, int limit) {
    return assoc_laguerre(n, 0, x, limit);
}

double assoc_laguerre(int n, int k, double x, int limit) {
    if (n < 0 || k < 0) {
        throw DomainError("assoc_laguerre: indices must be non-negative");
    }
    if (n + k > limit) {
        throw DomainError("assoc_laguerre: n + k = " + std::to_string(n + k) +
                          " exceeds degree limit " + std::to_string(limit));
    }
    if (!(x >= 0.0)) {
        throw DomainError("assoc_laguerre: argument must be non-negative");
    }

    const double kd = static_cast<double>(k);
    double prev = 1.0;
    if (n == 0) return prev;
    double curr = 1.0 + kd - x;
    for (int i = 1; i < n; ++i) {
        const double id = static_cast<double>(i);
        const double next = ((2.0 * id + 1.0 + kd - x) * curr - (id + kd) * prev) / (id + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

double assoc_laguerre(PolyOrder order, double x, int limit) {
    return assoc_laguerre(order.n, order.k, x, limit);
}

double log_factorial_ratio(int m, int n) {
    if (m < 0 || n < 0) {
        throw DomainError("log_factorial_ratio: arguments must be non-negative");
    }
    const int lo = m < n ? m : n;
    const int hi = m < n ? n : m;
    double sum = 0.0;
    for (int i = lo + 1; i <= hi; ++i) {
        sum += std::log(static_cast<double>(i));
    }
    return m >= n ? sum : -sum;
}

} // namespace rabi::special
