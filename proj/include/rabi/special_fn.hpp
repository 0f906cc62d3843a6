// special_fn.hpp - Laguerre polynomials and factorial ratios for displaced-state overlaps

#pragma once

namespace rabi::special {

// Largest polynomial degree accepted by the recurrences.
inline constexpr int kDefaultDegreeLimit = 512;

// Degree n and association index k of L_n^k.
struct PolyOrder {
    int n{0};
    int k{0};
};

// L_n(x) by the ascending three-term recurrence. Same code path as assoc_laguerre(n, 0, x).
// Throws DomainError for x < 0, n < 0 or n > limit.
double laguerre(int n, double x, int limit = kDefaultDegreeLimit);

// L_n^k(x) by the ascending three-term recurrence in n at fixed k:
//   (i+1) L_{i+1} = (2i+1+k-x) L_i - (i+k) L_{i-1},  L_0 = 1,  L_1 = 1+k-x.
// Throws DomainError for x < 0, negative indices, or n + k > limit.
double assoc_laguerre(int n, int k, double x, int limit = kDefaultDegreeLimit);
double assoc_laguerre(PolyOrder order, double x, int limit = kDefaultDegreeLimit);

// ln(m!/n!) as a signed sum of logarithms; factorials are never formed.
double log_factorial_ratio(int m, int n);

} // namespace rabi::special
