// exact_diag.hpp - Truncated Fock x qubit Rabi Hamiltonian, its exact spectrum, and
// the pairing of approximate levels with exact ones.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabi/adiabatic.hpp"
#include "rabi/displaced.hpp"
#include "rabi/eigensolver.hpp"

namespace rabi {

inline constexpr int kDefaultDim = 120;

// H = (omega0/2) sigma_z + a^dag a + beta (a + a^dag) sigma_x on |k>|up>, |k>|down>,
// k = 0..dim-1, interleaved as in fock_index().
struct TruncatedHamiltonian {
    int dim{0};
    Eigen::MatrixXd matrix;
    ModelParams params;
};

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, int dim);

struct ExactSpectrum {
    Eigen::VectorXd values;   // ascending, units of hbar omega
    Eigen::MatrixXd vectors;  // columns
    int dim{0};
    double norm_h{0.0};       // spectral norm max |lambda|
    double residual_max{0.0};
    double convergence_delta{0.0};  // max change of the lowest quarter vs. dim - 20
    bool truncation_limited{false}; // convergence_delta > 1e-8
};

struct ExactOptions {
    bool check_convergence{true};
    int convergence_step{20};
    double convergence_tol{1e-8};
};

// Fock truncation large enough for blocks up to max_n.
inline int recommended_dim(int max_n) { return 4 * max_n + 40; }

ExactSpectrum exact_levels(const ModelParams& params, int dim, const ExactOptions& options = {});

// An approximate level to be located in an exact spectrum.
struct MatchCandidate {
    int n{0};
    Branch sign{Branch::plus};
    AdiabaticState state;  // need not be normalized
};

struct LevelMatch {
    int exact_index{-1};
    double overlap2{0.0};   // |<exact|candidate>|^2, or projection onto a degenerate span
    bool ambiguous{false};
};

enum class MatchMode { strict, lenient };

// Each candidate maps to the exact level with the largest overlap. Exact levels closer
// than 1e-10 are treated as one span. In strict mode an overlap^2 below 0.5 or two
// candidates claiming the same level throws AmbiguousMatchError; in lenient mode the
// affected entries are flagged instead.
std::vector<LevelMatch> match_levels(const ExactSpectrum& exact, const std::vector<MatchCandidate>& candidates,
                                     const ModelParams& params, MatchMode mode = MatchMode::strict);

// Squared norm of the projection of the normalized vector onto span{exact levels in indices}.
double subspace_overlap(const ExactSpectrum& exact, const std::vector<int>& indices,
                        const Eigen::VectorXcd& vector);

} // namespace rabi
