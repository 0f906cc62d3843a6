// perturbation.hpp - Non-degenerate second-order corrections on top of the adiabatic
// (degenerate) treatment.
//
// With V = (omega0/2) sigma_z, the only couplings between different blocks are
//   <E0_{I,s'}| V |E0_{N,s}> = (omega0/4) (s <I_+|N_-> + s' <I_-|N_+>),
// which by the parity relation collapse to the closed forms
//   a+_{N,I} = -b-_{N,I} = (1 + (-1)^{N-I}) <I_+|N_-> omega0 / (4 (N-I)),
//   b+_{N,I} = -a-_{N,I} = (1 - (-1)^{N-I}) <I_+|N_-> omega0 / (4 (N-I)).

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "rabi/adiabatic.hpp"
#include "rabi/displaced.hpp"

namespace rabi {

// Which cross terms I != N enter the corrections.
struct CutoffPolicy {
    enum class Kind { all, threshold, top };

    Kind kind{Kind::all};
    double tau{0.0};  // threshold: keep |<I_+|N_->| >= tau * max_{I' != N} |<I'_+|N_->|
    int k{0};         // top: keep the k largest |<I_+|N_->|

    static CutoffPolicy all() { return {}; }
    static CutoffPolicy threshold(double tau);
    static CutoffPolicy top(int k);

    // "all", "threshold:<tau>" or "top:<k>". Throws std::invalid_argument.
    static CutoffPolicy parse(const std::string& text);
    std::string describe() const;
};

// Energy denominators for the cross-block sums.
enum class Denominators {
    unsplit,  // (N - I), the bare block spacing
    split,    // E0_{N,s} - E0_{I,s'}, includes the +-Omega splittings
};

struct PerturbationOptions {
    CutoffPolicy policy{};
    Denominators denominators{Denominators::unsplit};
    bool renormalize{false};  // divide the first-order eigenvector by its norm
};

struct CorrectionTerm {
    int i{0};
    double a_plus{0.0};
    double b_plus{0.0};
    double a_minus{0.0};
    double b_minus{0.0};
};

struct CorrectionSet {
    int n{0};
    std::vector<CorrectionTerm> coefficients;  // one per retained I, ascending
    std::array<double, 2> shifts{0.0, 0.0};    // second-order shift for (+, -)
    PerturbationOptions options{};

    double shift(Branch b) const { return shifts[b == Branch::plus ? 0 : 1]; }
    // Common shift; equal for both branches with unsplit denominators.
    double energy_shift() const { return shifts[0]; }
};

struct CorrectedLevel {
    AdiabaticLevel base;
    double shift{0.0};
    double corrected_energy{0.0};
    AdiabaticState eigenvector;
    bool residually_degenerate{false};  // |Omega_N| < 1e-12
};

// Retained I set (ascending, never containing n).
std::vector<int> select_terms(int n, const OverlapTable& table, const CutoffPolicy& policy);

// <E0_{I,s'}| V |E0_{N,s}> computed from the table entries <I_+|N_-> and <I_-|N_+>.
double cross_coupling(int n, Branch s, int i, Branch s_prime, const ModelParams& params,
                      const OverlapTable& table);

// Closed-form coefficients for one (N, I) pair with unsplit denominators.
CorrectionTerm closed_form_term(int n, int i, const ModelParams& params, const OverlapTable& table);

// Coefficients from the two-overlap matrix-element forms, with <I_-|N_+> evaluated
// directly as <I| D(-2 beta) |N> rather than through the parity relation.
CorrectionTerm raw_term(int n, int i, const ModelParams& params);

CorrectionSet correction_coefficients(int n, const ModelParams& params, const OverlapTable& table,
                                      const PerturbationOptions& options = {});
// Explicit retained set. Throws DomainError if it contains n or an index outside the table.
CorrectionSet correction_coefficients(int n, const ModelParams& params, const OverlapTable& table,
                                      std::span<const int> retained,
                                      const PerturbationOptions& options = {});

struct CorrectedEnergies {
    double e_plus{0.0};
    double e_minus{0.0};
};

CorrectedEnergies corrected_energies(int n, const ModelParams& params, const OverlapTable& table,
                                     const PerturbationOptions& options = {});

// First-order eigenvector over |E0_{I,+-}> with I <= table.max_n(). The amplitude on
// (n, sign) is exactly 1 unless options.renormalize is set.
CorrectedLevel corrected_eigenvector(int n, Branch sign, const ModelParams& params,
                                     const OverlapTable& table, const PerturbationOptions& options = {});

} // namespace rabi
