#include "rabi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "rabi/eigensolver.hpp"
#include "rabi/errors.hpp"
#include "rabi/exact_diag.hpp"

namespace rabi {

namespace {

using cplx = std::complex<double>;

constexpr double kDeficitTol = 1e-6;

void check_deficit(double norm2, const char* what) {
    if (std::abs(1.0 - norm2) > kDeficitTol) {
        throw TruncationError(std::string("evolve: initial state not representable in the ") + what +
                              " basis (norm^2 " + std::to_string(norm2) + ")");
    }
}

// Adiabatic-basis amplitudes over blocks 0..max_n, normalized.
Eigen::VectorXcd as_adiabatic(const CompositeState& state, int max_n, int dim) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * (max_n + 1));
    if (state.basis == StateBasis::adiabatic) {
        const Eigen::Index keep = std::min<Eigen::Index>(out.size(), state.amplitudes.size());
        out.head(keep) = state.amplitudes.head(keep);
    } else {
        const FockEmbedding embedding(state.params, max_n, state.dim > 0 ? state.dim : dim);
        out = embedding.project(state.amplitudes).amplitudes;
    }
    check_deficit(out.squaredNorm(), "adiabatic");
    return out / out.norm();
}

// Fock x qubit amplitudes with truncation dim, normalized.
Eigen::VectorXcd as_fock(const CompositeState& state, int dim) {
    Eigen::VectorXcd out;
    if (state.basis == StateBasis::fock_qubit) {
        if (state.dim != dim) {
            out = Eigen::VectorXcd::Zero(2 * dim);
            const Eigen::Index keep = std::min<Eigen::Index>(out.size(), state.amplitudes.size());
            out.head(keep) = state.amplitudes.head(keep);
        } else {
            out = state.amplitudes;
        }
    } else {
        const FockEmbedding embedding(state.params, state.max_n, dim);
        AdiabaticState a(state.max_n);
        a.amplitudes = state.amplitudes;
        out = embedding.embed(a);
    }
    check_deficit(out.squaredNorm(), "Fock x qubit");
    return out / out.norm();
}

// Evolution in an orthonormal eigenbasis: psi(t) = U diag(e^{-i E t}) U^dag psi(0).
struct Propagator {
    Eigen::MatrixXd basis;     // columns orthonormal
    Eigen::VectorXd energies;
    bool fock{false};
};

Propagator adiabatic_propagator(const ModelParams& params, int max_n) {
    Propagator p;
    p.basis = Eigen::MatrixXd::Identity(2 * (max_n + 1), 2 * (max_n + 1));
    p.energies.resize(2 * (max_n + 1));
    for (const auto& level : adiabatic_levels(max_n, params)) {
        p.energies(adiabatic_index(level.n, level.sign)) = level.energy;
    }
    return p;
}

Propagator corrected_propagator(const ModelParams& params, int max_n, const PerturbationOptions& opts,
                                double& defect) {
    const OverlapTable table(max_n, params.beta);
    PerturbationOptions normalized = opts;
    normalized.renormalize = true;

    const int size = 2 * (max_n + 1);
    Eigen::MatrixXd vecs(size, size);
    Eigen::VectorXd energies(size);
    for (int n = 0; n <= max_n; ++n) {
        for (Branch s : {Branch::plus, Branch::minus}) {
            const CorrectedLevel level = corrected_eigenvector(n, s, params, table, normalized);
            vecs.col(adiabatic_index(n, s)) = level.eigenvector.amplitudes.real();
            energies(adiabatic_index(n, s)) = level.corrected_energy;
        }
    }

    // The first-order vectors are orthogonal only up to second order; Loewdin's
    // symmetric orthonormalization U = V S^{-1/2} fixes that at the same order.
    const Eigen::MatrixXd overlap = vecs.transpose() * vecs;
    defect = (overlap - Eigen::MatrixXd::Identity(size, size)).cwiseAbs().maxCoeff();

    Propagator p;
    p.energies = energies;
    if (defect == 0.0) {
        p.basis = vecs;
    } else {
        const EigenPairs eig = eigendecompose(overlap);
        if (eig.values.minCoeff() <= 0.0) {
            throw ConvergenceError("corrected engine: first-order eigenvectors are linearly dependent");
        }
        const Eigen::VectorXd inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
        p.basis = vecs * (eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose());
    }
    return p;
}

Propagator exact_propagator(const ModelParams& params, int dim) {
    ExactOptions opts;
    opts.check_convergence = false;
    ExactSpectrum ex = exact_levels(params, dim, opts);
    Propagator p;
    p.fock = true;
    p.basis = std::move(ex.vectors);
    p.energies = std::move(ex.values);
    return p;
}

double qubit_plus_probability(const Eigen::VectorXcd& psi) {
    double sum = 0.0;
    const Eigen::Index pairs = psi.size() / 2;
    for (Eigen::Index k = 0; k < pairs; ++k) {
        // Fock: (psi_up + psi_down)/sqrt2 is the |+> component. Adiabatic: <k_+,+|psi>
        // = (c_{k,+} + c_{k,-})/sqrt2 and the |k_+> are complete within the + branch.
        sum += 0.5 * std::norm(psi(2 * k) + psi(2 * k + 1));
    }
    return sum;
}

} // namespace

CompositeState CompositeState::from_adiabatic(const AdiabaticState& state, const ModelParams& params,
                                              std::string label) {
    CompositeState out;
    out.basis = StateBasis::adiabatic;
    out.amplitudes = state.amplitudes;
    out.params = params;
    out.max_n = state.max_n;
    out.label = std::move(label);
    return out;
}

CompositeState CompositeState::from_fock(Eigen::VectorXcd amplitudes, const ModelParams& params, int dim,
                                         std::string label) {
    if (amplitudes.size() != 2 * dim) {
        throw DomainError("CompositeState::from_fock: expected 2*dim amplitudes");
    }
    CompositeState out;
    out.basis = StateBasis::fock_qubit;
    out.amplitudes = std::move(amplitudes);
    out.params = params;
    out.dim = dim;
    out.label = std::move(label);
    return out;
}

CompositeState CompositeState::displaced_product(int n, Branch branch, const ModelParams& params, int max_n) {
    if (n < 0 || n > max_n) {
        throw DomainError("displaced_product: n outside 0..max_n");
    }
    AdiabaticState a(max_n);
    const double r = 1.0 / std::sqrt(2.0);
    a.amplitude(n, Branch::plus) = r;
    a.amplitude(n, Branch::minus) = branch == Branch::plus ? r : -r;
    const std::string label = "|" + std::to_string(n) + "_" + to_string(branch) + "," + to_string(branch) + ">";
    return from_adiabatic(a, params, label);
}

const char* to_string(Engine e) noexcept {
    switch (e) {
    case Engine::adiabatic: return "adiabatic";
    case Engine::corrected: return "corrected";
    case Engine::exact: return "exact";
    }
    return "?";
}

std::string PopulationTarget::column_name() const {
    return std::string(branch == Branch::plus ? "pop_pp_" : "pop_mm_") + std::to_string(n);
}

const std::vector<double>& TimeSeries::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw std::out_of_range("TimeSeries: no column '" + name + "'");
    }
    return columns[static_cast<std::size_t>(it - names.begin())];
}

double survival_probability_adiabatic(int n, const ModelParams& params, double t) {
    if (t < 0.0) {
        throw DomainError("survival_probability_adiabatic: t must be >= 0");
    }
    const double c = std::cos(rabi_frequency(n, params) * t);
    return c * c;
}

std::vector<double> uniform_time_grid(double t_max, int samples) {
    if (samples < 2 || !(t_max > 0.0) || !std::isfinite(t_max)) {
        throw DomainError("uniform_time_grid: need samples >= 2 and a finite t_max > 0");
    }
    std::vector<double> times(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        times[static_cast<std::size_t>(i)] = t_max * i / (samples - 1);
    }
    return times;
}

std::vector<double> default_time_grid(int n, const ModelParams& params, int samples) {
    const double omega = std::abs(rabi_frequency(n, params));
    double t_max = 2.0 * std::numbers::pi;
    if (omega > 1e-12) {
        t_max = 2.0 * std::numbers::pi / omega;
    } else if (params.omega0_ratio > 0.0) {
        t_max = 4.0 * std::numbers::pi / params.omega0_ratio;
    }
    return uniform_time_grid(t_max, samples);
}

TimeSeries evolve(const CompositeState& initial, Engine engine, const ModelParams& params,
                  const std::vector<double>& times, const EvolveOptions& options) {
    params.validate();
    if (options.max_n < 0 || options.dim < 2) {
        throw DomainError("evolve: max_n must be >= 0 and dim >= 2");
    }
    if (std::abs(initial.norm() - 1.0) > 1e-10) {
        throw DomainError("evolve: initial state must be normalized");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw DomainError("evolve: times must be finite and strictly increasing");
        }
    }

    double defect = 0.0;
    Propagator prop;
    switch (engine) {
    case Engine::adiabatic: prop = adiabatic_propagator(params, options.max_n); break;
    case Engine::corrected: prop = corrected_propagator(params, options.max_n, options.perturbation, defect); break;
    case Engine::exact: prop = exact_propagator(params, options.dim); break;
    }

    const Eigen::VectorXcd psi0 = prop.fock ? as_fock(initial, options.dim)
                                            : as_adiabatic(initial, options.max_n, options.dim);

    // Observable vectors in the engine's space.
    std::vector<Eigen::VectorXcd> targets;
    targets.reserve(options.targets.size());
    std::optional<FockEmbedding> embedding;
    if (prop.fock && !options.targets.empty()) {
        int top = 0;
        for (const auto& t : options.targets) top = std::max(top, t.n);
        embedding.emplace(params, top, options.dim);
    }
    for (const auto& t : options.targets) {
        if (t.n < 0) throw DomainError("evolve: target n must be non-negative");
        if (prop.fock) {
            targets.push_back(embedding->displaced_product(t.n, t.branch).cast<cplx>());
        } else {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(psi0.size());
            if (t.n <= options.max_n) {
                const double r = 1.0 / std::sqrt(2.0);
                v(adiabatic_index(t.n, Branch::plus)) = r;
                v(adiabatic_index(t.n, Branch::minus)) = t.branch == Branch::plus ? r : -r;
            }
            targets.push_back(std::move(v));
        }
    }

    const Eigen::VectorXcd coeffs = prop.basis.transpose().cast<cplx>() * psi0;
    const Eigen::MatrixXcd basis = prop.basis.cast<cplx>();

    TimeSeries ts;
    ts.times = times;
    ts.engine = engine;
    ts.params = params;
    ts.initial = initial.label;
    ts.orthogonality_defect = defect;
    ts.names = {"survival", "qubit_plus", "norm"};
    for (const auto& t : options.targets) ts.names.push_back(t.column_name());
    ts.columns.assign(ts.names.size(), std::vector<double>(times.size()));

    // Each time point depends only on t, so evaluation order cannot affect results.
    Eigen::VectorXcd phased(coeffs.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            const double phase = -prop.energies(k) * t;
            phased(k) = coeffs(k) * cplx(std::cos(phase), std::sin(phase));
        }
        const Eigen::VectorXcd psi = basis * phased;
        ts.columns[0][i] = std::norm(psi0.dot(psi));
        ts.columns[1][i] = qubit_plus_probability(psi);
        ts.columns[2][i] = psi.squaredNorm();
        for (std::size_t j = 0; j < targets.size(); ++j) {
            ts.columns[3 + j][i] = std::norm(targets[j].dot(psi));
        }
    }
    return ts;
}

double displaced_population(const CompositeState& state, int target_n, Branch target_branch,
                            const ModelParams& params) {
    if (target_n < 0) {
        throw DomainError("displaced_population: target n must be non-negative");
    }
    if (state.basis == StateBasis::adiabatic) {
        if (target_n > state.max_n) return 0.0;
        const double r = 1.0 / std::sqrt(2.0);
        const cplx a = state.amplitudes(adiabatic_index(target_n, Branch::plus));
        const cplx b = state.amplitudes(adiabatic_index(target_n, Branch::minus));
        return std::norm(r * (target_branch == Branch::plus ? a + b : a - b));
    }
    const FockEmbedding embedding(params, target_n, state.dim);
    const Eigen::VectorXcd target = embedding.displaced_product(target_n, target_branch).cast<cplx>();
    return std::norm(target.dot(state.amplitudes));
}

} // namespace rabi
