// displaced.hpp - Model parameters, displacement-operator matrix elements and the
// overlap table <M_+|N_-> between displaced number states.
//
// Conventions (hbar = omega = 1):
//   D(a) = exp(a (a^dag - a)),  |N_+> = D(-beta)|N>,  |N_-> = D(+beta)|N>.
// Hence <M_+|N_-> = <M| D(2 beta) |N>, and <M_-|N_+> = (-1)^(N-M) <M_+|N_->.

#pragma once

#include <Eigen/Dense>

namespace rabi {

struct ModelParams {
    double beta{0.0};          // coupling, units of omega
    double omega0_ratio{0.0};  // qubit splitting omega_0 / omega

    // Throws DomainError on negative or non-finite values.
    void validate() const;

    // The block-diagonal treatment assumes omega_0 << omega.
    bool outside_adiabatic_regime() const noexcept { return omega0_ratio > 0.5; }
};

// <m| D(alpha) |n> for real alpha, evaluated in log-magnitude + sign form:
//   m >= n:  e^{-alpha^2/2} alpha^{m-n} sqrt(n!/m!) L_n^{m-n}(alpha^2)
//   m <  n:  (-1)^{n-m} times the same expression with m and n swapped.
double displacement_element(int m, int n, double alpha);

// <m_+|n_-> = <m| D(2 beta) |n>. Throws DomainError for negative indices or beta < 0.
double displaced_overlap(int m, int n, double beta);

// Fock coefficients <k| D(displacement) |n_level> for k = 0..dim-1, built by applying
// (a^dag - displacement)/sqrt(j+1) repeatedly to the coherent state. No Laguerre
// polynomials are involved, so this serves as an independent route to the overlaps.
// Throws TruncationError when the captured norm falls short of 1 by more than 1e-8,
// and DomainError when dim <= n_level.
Eigen::VectorXd displaced_fock_coeffs(int n_level, double displacement, int dim);

// Dense (max_n+1) x (max_n+1) cache of <M_+|N_-> at fixed beta. Immutable.
class OverlapTable {
public:
    OverlapTable(int max_n, double beta);

    int max_n() const noexcept { return max_n_; }
    double beta() const noexcept { return beta_; }

    // <m_+|n_->
    double plus_minus(int m, int n) const { return entries_(m, n); }
    // <m_-|n_+> = (-1)^(n-m) <m_+|n_->
    double minus_plus(int m, int n) const {
        return ((n - m) % 2 == 0) ? entries_(m, n) : -entries_(m, n);
    }

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }

private:
    int max_n_;
    double beta_;
    Eigen::MatrixXd entries_;
};

OverlapTable overlap_table(int max_n, double beta);

} // namespace rabi
