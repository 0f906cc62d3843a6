// dynamics.hpp - Time evolution of qubit x oscillator states under the adiabatic,
// corrected-perturbative and exact engines, with survival and population observables.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabi/adiabatic.hpp"
#include "rabi/displaced.hpp"
#include "rabi/perturbation.hpp"

namespace rabi {

enum class StateBasis { adiabatic, fock_qubit };

struct CompositeState {
    StateBasis basis{StateBasis::adiabatic};
    Eigen::VectorXcd amplitudes;
    ModelParams params{};
    int max_n{0};  // adiabatic basis: blocks 0..max_n
    int dim{0};    // fock_qubit basis: Fock truncation (vector length 2*dim)
    std::string label;

    double norm() const { return amplitudes.norm(); }

    static CompositeState from_adiabatic(const AdiabaticState& state, const ModelParams& params,
                                         std::string label = {});
    static CompositeState from_fock(Eigen::VectorXcd amplitudes, const ModelParams& params, int dim,
                                    std::string label = {});
    // |n_+,+> (Branch::plus) or |n_-,-> (Branch::minus), held in the adiabatic basis.
    static CompositeState displaced_product(int n, Branch branch, const ModelParams& params, int max_n);
};

enum class Engine { adiabatic, corrected, exact };
const char* to_string(Engine e) noexcept;

// Target |n_+,+> (plus_plus) or |n_-,-> (minus_minus).
struct PopulationTarget {
    int n{0};
    Branch branch{Branch::plus};
    std::string column_name() const;  // "pop_pp_<n>" or "pop_mm_<n>"
};

struct EvolveOptions {
    int max_n{20};  // adiabatic-basis truncation for the adiabatic and corrected engines
    int dim{120};   // Fock truncation for the exact engine and for basis conversions
    PerturbationOptions perturbation{};
    std::vector<PopulationTarget> targets;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    Engine engine{Engine::adiabatic};
    ModelParams params{};
    std::string initial;
    // Corrected engine: max |<v_i|v_j> - delta_ij| of the renormalized first-order
    // eigenvectors before orthonormalization. Zero for the other engines.
    double orthogonality_defect{0.0};

    const std::vector<double>& column(const std::string& name) const;
};

// cos^2(Omega_n t)
double survival_probability_adiabatic(int n, const ModelParams& params, double t);

// `samples` uniform points on [0, t_max]. t_max = 2 pi / |Omega_n| (two periods of the
// adiabatic survival); when Omega_n vanishes, 4 pi / omega0 or 2 pi if omega0 is zero too.
std::vector<double> default_time_grid(int n, const ModelParams& params, int samples = 400);
std::vector<double> uniform_time_grid(double t_max, int samples);

// Columns: survival = |<psi(0)|psi(t)>|^2, qubit_plus = P(qubit in |+>), norm = <psi|psi>,
// then one population column per requested target.
// Throws TruncationError when the initial state loses more than 1e-6 of its norm in the
// engine's basis, DomainError for an unnormalized initial state or a non-increasing grid.
TimeSeries evolve(const CompositeState& initial, Engine engine, const ModelParams& params,
                  const std::vector<double>& times, const EvolveOptions& options = {});

// |<target|state>|^2
double displaced_population(const CompositeState& state, int target_n, Branch target_branch,
                            const ModelParams& params);

} // namespace rabi
