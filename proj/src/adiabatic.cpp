#include "rabi/adiabatic.hpp"

#include <cmath>

#include "rabi/errors.hpp"
#include "rabi/special_fn.hpp"

namespace rabi {

double rabi_frequency(int n, const ModelParams& params) {
    params.validate();
    if (n < 0) {
        throw DomainError("rabi_frequency: n must be non-negative");
    }
    const double b2 = params.beta * params.beta;
    return 0.5 * params.omega0_ratio * std::exp(-2.0 * b2) * special::laguerre(n, 4.0 * b2);
}

AdiabaticLevel adiabatic_level(int n, Branch sign, const ModelParams& params) {
    const double omega_n = rabi_frequency(n, params);
    const double base = static_cast<double>(n) - params.beta * params.beta;
    return {n, sign, omega_n, base + sign_of(sign) * omega_n};
}

std::vector<AdiabaticLevel> adiabatic_levels(int max_n, const ModelParams& params) {
    if (max_n < 0) {
        throw DomainError("adiabatic_levels: max_n must be non-negative");
    }
    std::vector<AdiabaticLevel> levels;
    levels.reserve(2 * static_cast<std::size_t>(max_n + 1));
    for (int n = 0; n <= max_n; ++n) {
        levels.push_back(adiabatic_level(n, Branch::plus, params));
        levels.push_back(adiabatic_level(n, Branch::minus, params));
    }
    return levels;
}

std::array<std::array<double, 2>, 2> block_hamiltonian(int n, const ModelParams& params) {
    const double diag = static_cast<double>(n) - params.beta * params.beta;
    const double off = rabi_frequency(n, params);
    return {{{diag, off}, {off, diag}}};
}

AdiabaticState adiabatic_eigenvector(int n, Branch sign, int max_n) {
    if (n < 0) {
        throw DomainError("adiabatic_eigenvector: n must be non-negative");
    }
    if (max_n < 0) max_n = n;
    if (n > max_n) {
        throw DomainError("adiabatic_eigenvector: n exceeds max_n");
    }
    AdiabaticState state(max_n);
    state.amplitude(n, sign) = 1.0;
    return state;
}

FockEmbedding::FockEmbedding(const ModelParams& params, int max_n, int dim)
    : max_n_(max_n), dim_(dim) {
    params.validate();
    if (max_n < 0) {
        throw DomainError("FockEmbedding: max_n must be non-negative");
    }
    plus_.reserve(max_n + 1);
    minus_.reserve(max_n + 1);
    for (int n = 0; n <= max_n; ++n) {
        plus_.push_back(displaced_fock_coeffs(n, -params.beta, dim));
        minus_.push_back(displaced_fock_coeffs(n, params.beta, dim));
    }
}

Eigen::VectorXd FockEmbedding::basis_vector(int n, Branch sign) const {
    // |E0_{n,s}> = (|n_+>|+> + s |n_->|->)/sqrt2 with |+-> = (|up> +- |down>)/sqrt2.
    const double s = sign_of(sign);
    Eigen::VectorXd v(2 * dim_);
    for (int k = 0; k < dim_; ++k) {
        v(fock_index(k, true)) = 0.5 * (plus_[n](k) + s * minus_[n](k));
        v(fock_index(k, false)) = 0.5 * (plus_[n](k) - s * minus_[n](k));
    }
    return v;
}

Eigen::VectorXd FockEmbedding::displaced_product(int n, Branch branch) const {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::VectorXd v(2 * dim_);
    const Eigen::VectorXd& osc = branch == Branch::plus ? plus_[n] : minus_[n];
    const double down = branch == Branch::plus ? r : -r;
    for (int k = 0; k < dim_; ++k) {
        v(fock_index(k, true)) = r * osc(k);
        v(fock_index(k, false)) = down * osc(k);
    }
    return v;
}

Eigen::VectorXcd FockEmbedding::embed(const AdiabaticState& state) const {
    if (state.max_n > max_n_) {
        throw DomainError("FockEmbedding::embed: state max_n exceeds embedding max_n");
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * dim_);
    for (int n = 0; n <= state.max_n; ++n) {
        for (Branch s : {Branch::plus, Branch::minus}) {
            const std::complex<double> a = state.amplitude(n, s);
            if (a == std::complex<double>(0.0)) continue;
            out += a * basis_vector(n, s).cast<std::complex<double>>();
        }
    }
    return out;
}

AdiabaticState FockEmbedding::project(const Eigen::VectorXcd& fock) const {
    if (fock.size() != 2 * dim_) {
        throw DomainError("FockEmbedding::project: vector size mismatch");
    }
    AdiabaticState out(max_n_);
    for (int n = 0; n <= max_n_; ++n) {
        for (Branch s : {Branch::plus, Branch::minus}) {
            out.amplitude(n, s) = basis_vector(n, s).cast<std::complex<double>>().dot(fock);
        }
    }
    return out;
}

} // namespace rabi
