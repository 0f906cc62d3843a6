#include "rabi/exact_diag.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rabi/errors.hpp"

namespace rabi {

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, int dim) {
    params.validate();
    if (dim < 2) {
        throw DomainError("build_hamiltonian: dim must be >= 2");
    }
    TruncatedHamiltonian h;
    h.dim = dim;
    h.params = params;
    h.matrix = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    const double half = 0.5 * params.omega0_ratio;
    for (int k = 0; k < dim; ++k) {
        h.matrix(fock_index(k, true), fock_index(k, true)) = k + half;
        h.matrix(fock_index(k, false), fock_index(k, false)) = k - half;
        if (k + 1 < dim) {
            const double g = params.beta * std::sqrt(static_cast<double>(k + 1));
            // a^dag raises k, sigma_x flips the qubit.
            h.matrix(fock_index(k + 1, false), fock_index(k, true)) = g;
            h.matrix(fock_index(k, true), fock_index(k + 1, false)) = g;
            h.matrix(fock_index(k + 1, true), fock_index(k, false)) = g;
            h.matrix(fock_index(k, false), fock_index(k + 1, true)) = g;
        }
    }
    return h;
}

ExactSpectrum exact_levels(const ModelParams& params, int dim, const ExactOptions& options) {
    const TruncatedHamiltonian h = build_hamiltonian(params, dim);
    EigenPairs pairs = eigendecompose(h.matrix);

    ExactSpectrum out;
    out.dim = dim;
    out.norm_h = pairs.values.cwiseAbs().maxCoeff();
    out.residual_max = max_residual(h.matrix, pairs);
    out.values = std::move(pairs.values);
    out.vectors = std::move(pairs.vectors);

    if (options.check_convergence && dim - options.convergence_step >= 2) {
        const int smaller_dim = dim - options.convergence_step;
        const EigenPairs smaller = eigendecompose(build_hamiltonian(params, smaller_dim).matrix);
        const Eigen::Index count = std::max<Eigen::Index>(1, smaller.values.size() / 4);
        out.convergence_delta =
            (out.values.head(count) - smaller.values.head(count)).cwiseAbs().maxCoeff();
        out.truncation_limited = out.convergence_delta > options.convergence_tol;
    }
    return out;
}

double subspace_overlap(const ExactSpectrum& exact, const std::vector<int>& indices,
                        const Eigen::VectorXcd& vector) {
    if (vector.size() != exact.vectors.rows()) {
        throw DomainError("subspace_overlap: vector size mismatch");
    }
    const double norm = vector.norm();
    if (norm == 0.0) {
        throw DomainError("subspace_overlap: zero vector");
    }
    double sum = 0.0;
    for (int j : indices) {
        sum += std::norm(exact.vectors.col(j).cast<std::complex<double>>().dot(vector));
    }
    return sum / (norm * norm);
}

std::vector<LevelMatch> match_levels(const ExactSpectrum& exact, const std::vector<MatchCandidate>& candidates,
                                     const ModelParams& params, MatchMode mode) {
    int max_n = 0;
    for (const auto& c : candidates) max_n = std::max(max_n, c.state.max_n);
    const FockEmbedding embedding(params, max_n, exact.dim);

    // Clusters of exact levels closer than 1e-10.
    const Eigen::Index levels = exact.values.size();
    std::vector<std::vector<int>> clusters;
    for (Eigen::Index j = 0; j < levels; ++j) {
        if (j == 0 || exact.values(j) - exact.values(j - 1) > 1e-10) clusters.emplace_back();
        clusters.back().push_back(static_cast<int>(j));
    }

    std::vector<LevelMatch> matches;
    std::vector<int> used(clusters.size(), 0);
    matches.reserve(candidates.size());
    for (const auto& c : candidates) {
        const Eigen::VectorXcd v = embedding.embed(c.state);
        const double vnorm2 = v.squaredNorm();
        const Eigen::VectorXcd proj = exact.vectors.transpose().cast<std::complex<double>>() * v;

        int best_cluster = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            double w = 0.0;
            for (int j : clusters[k]) w += std::norm(proj(j));
            w /= vnorm2;
            if (w > best) {
                best = w;
                best_cluster = static_cast<int>(k);
            }
        }

        LevelMatch m;
        m.overlap2 = best;
        const auto& members = clusters[static_cast<std::size_t>(best_cluster)];
        int& taken = used[static_cast<std::size_t>(best_cluster)];
        const std::string label = "(" + std::to_string(c.n) + "," + to_string(c.sign) + ")";
        if (taken >= static_cast<int>(members.size())) {
            if (mode == MatchMode::strict) {
                throw AmbiguousMatchError("match_levels: level " + label + " claims exact level " +
                                          std::to_string(members.front()) + " already matched");
            }
            m.ambiguous = true;
            m.exact_index = members.front();
        } else {
            m.exact_index = members[static_cast<std::size_t>(taken)];
            ++taken;
        }
        if (best < 0.5) {
            if (mode == MatchMode::strict) {
                throw AmbiguousMatchError("match_levels: best overlap^2 " + std::to_string(best) +
                                          " for level " + label + " is below 0.5");
            }
            m.ambiguous = true;
        }
        matches.push_back(m);
    }
    return matches;
}

} // namespace rabi
