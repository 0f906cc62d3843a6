// adiabatic.hpp - Block-diagonal (adiabatic) treatment: 2x2 blocks H_N, splittings
// Omega_N, energies E0_{N,+-} and the basis |E0_{N,+-}> = (|N_+,+> +- |N_-,->)/sqrt(2).

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabi/displaced.hpp"

namespace rabi {

// Labels the symmetric (+) or antisymmetric (-) combination within block N.
// Not an energy ordering: the ordering flips wherever L_N(4 beta^2) < 0.
enum class Branch { plus, minus };

inline constexpr int sign_of(Branch b) noexcept { return b == Branch::plus ? 1 : -1; }
inline constexpr Branch flipped(Branch b) noexcept {
    return b == Branch::plus ? Branch::minus : Branch::plus;
}
inline const char* to_string(Branch b) noexcept { return b == Branch::plus ? "+" : "-"; }

struct AdiabaticLevel {
    int n{0};
    Branch sign{Branch::plus};
    double omega_n{0.0};  // Omega_N, may be negative or zero
    double energy{0.0};   // N - beta^2 + sign * Omega_N
};

// Omega_N = (omega0/2) e^{-2 beta^2} L_N(4 beta^2).
double rabi_frequency(int n, const ModelParams& params);

AdiabaticLevel adiabatic_level(int n, Branch sign, const ModelParams& params);

// 2(max_n+1) levels ordered (0,+), (0,-), (1,+), ...
std::vector<AdiabaticLevel> adiabatic_levels(int max_n, const ModelParams& params);

// H_N in the basis {|N_+,+>, |N_-,->}: diagonal N - beta^2, off-diagonal Omega_N.
std::array<std::array<double, 2>, 2> block_hamiltonian(int n, const ModelParams& params);

// Position of |E0_{n,sign}> in the dense adiabatic-basis vector.
inline constexpr int adiabatic_index(int n, Branch sign) noexcept {
    return 2 * n + (sign == Branch::plus ? 0 : 1);
}

// State expanded over |E0_{N,+-}>, N = 0..max_n.
struct AdiabaticState {
    int max_n{0};
    Eigen::VectorXcd amplitudes;  // indexed by adiabatic_index

    explicit AdiabaticState(int max_n_ = 0)
        : max_n(max_n_), amplitudes(Eigen::VectorXcd::Zero(2 * (max_n_ + 1))) {}

    std::complex<double>& amplitude(int n, Branch sign) { return amplitudes(adiabatic_index(n, sign)); }
    std::complex<double> amplitude(int n, Branch sign) const { return amplitudes(adiabatic_index(n, sign)); }

    double norm() const { return amplitudes.norm(); }
    bool normalized(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }
};

// |E0_{n,sign}> as a single-term expansion (max_n defaults to n).
AdiabaticState adiabatic_eigenvector(int n, Branch sign, int max_n = -1);

// Interleaved Fock x qubit basis: index 2k for |k>|up>, 2k+1 for |k>|down>.
inline constexpr int fock_index(int k, bool up) noexcept { return 2 * k + (up ? 0 : 1); }

// Maps adiabatic-basis states into a truncated Fock x qubit space of dimension 2*dim,
// caching the displaced vectors D(-+beta)|N> for N = 0..max_n.
class FockEmbedding {
public:
    FockEmbedding(const ModelParams& params, int max_n, int dim);

    int max_n() const noexcept { return max_n_; }
    int dim() const noexcept { return dim_; }

    // |E0_{n,sign}> in the Fock x qubit basis.
    Eigen::VectorXd basis_vector(int n, Branch sign) const;
    // |n_+,+> for Branch::plus, |n_-,-> for Branch::minus.
    Eigen::VectorXd displaced_product(int n, Branch branch) const;

    Eigen::VectorXcd embed(const AdiabaticState& state) const;
    // Amplitudes <E0_{n,s}|psi> for n <= max_n. The caller checks the norm deficit.
    AdiabaticState project(const Eigen::VectorXcd& fock) const;

private:
    int max_n_;
    int dim_;
    std::vector<Eigen::VectorXd> plus_;   // D(-beta)|n>
    std::vector<Eigen::VectorXd> minus_;  // D(+beta)|n>
};

} // namespace rabi
