#include "rabi/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

void check_block(int n, const OverlapTable& table) {
    if (n < 0 || n > table.max_n()) {
        throw DomainError("perturbation: block " + std::to_string(n) + " outside overlap table (max_n " +
                          std::to_string(table.max_n()) + ")");
    }
}

double denominator(int n, Branch s, int i, Branch s_prime, const ModelParams& params,
                   Denominators mode) {
    double d = static_cast<double>(n - i);
    if (mode == Denominators::split) {
        d += sign_of(s) * rabi_frequency(n, params) - sign_of(s_prime) * rabi_frequency(i, params);
    }
    return d;
}

} // namespace

CutoffPolicy CutoffPolicy::threshold(double tau) {
    if (!std::isfinite(tau) || tau < 0.0) {
        throw std::invalid_argument("threshold policy needs a finite tau >= 0");
    }
    return {Kind::threshold, tau, 0};
}

CutoffPolicy CutoffPolicy::top(int k) {
    if (k < 0) {
        throw std::invalid_argument("top policy needs k >= 0");
    }
    return {Kind::top, 0.0, k};
}

CutoffPolicy CutoffPolicy::parse(const std::string& text) {
    if (text == "all") return all();
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("unknown cutoff policy '" + text + "'");
    }
    const std::string head = text.substr(0, colon);
    const std::string value = text.substr(colon + 1);
    std::size_t used = 0;
    try {
        if (head == "threshold") {
            const double tau = std::stod(value, &used);
            if (used == value.size()) return threshold(tau);
        } else if (head == "top") {
            const int k = std::stoi(value, &used);
            if (used == value.size()) return top(k);
        }
    } catch (const std::logic_error&) {
        // fall through to the error below
    }
    throw std::invalid_argument("malformed cutoff policy '" + text + "'");
}

std::string CutoffPolicy::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::all: os << "all"; break;
    case Kind::threshold: os << "threshold:" << tau; break;
    case Kind::top: os << "top:" << k; break;
    }
    return os.str();
}

std::vector<int> select_terms(int n, const OverlapTable& table, const CutoffPolicy& policy) {
    check_block(n, table);
    std::vector<int> candidates;
    for (int i = 0; i <= table.max_n(); ++i) {
        if (i != n) candidates.push_back(i);
    }
    auto weight = [&](int i) { return std::abs(table.plus_minus(i, n)); };

    switch (policy.kind) {
    case CutoffPolicy::Kind::all:
        return candidates;
    case CutoffPolicy::Kind::threshold: {
        double largest = 0.0;
        for (int i : candidates) largest = std::max(largest, weight(i));
        std::vector<int> kept;
        for (int i : candidates) {
            if (weight(i) >= policy.tau * largest) kept.push_back(i);
        }
        return kept;
    }
    case CutoffPolicy::Kind::top: {
        std::vector<int> order = candidates;
        // Largest first; ties resolved by the smaller index.
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return weight(a) > weight(b); });
        const auto keep = std::min<std::size_t>(static_cast<std::size_t>(policy.k), order.size());
        std::vector<int> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
        std::sort(kept.begin(), kept.end());
        return kept;
    }
    }
    return candidates;
}

double cross_coupling(int n, Branch s, int i, Branch s_prime, const ModelParams& params,
                      const OverlapTable& table) {
    return 0.25 * params.omega0_ratio *
           (sign_of(s) * table.plus_minus(i, n) + sign_of(s_prime) * table.minus_plus(i, n));
}

CorrectionTerm closed_form_term(int n, int i, const ModelParams& params, const OverlapTable& table) {
    check_block(n, table);
    check_block(i, table);
    if (i == n) {
        throw DomainError("closed_form_term: I = N has a vanishing denominator");
    }
    const double common = table.plus_minus(i, n) * params.omega0_ratio / (4.0 * (n - i));
    const bool even = ((n - i) % 2) == 0;
    CorrectionTerm t;
    t.i = i;
    t.a_plus = even ? 2.0 * common : 0.0;
    t.b_plus = even ? 0.0 : 2.0 * common;
    t.a_minus = -t.b_plus;
    t.b_minus = -t.a_plus;
    return t;
}

CorrectionTerm raw_term(int n, int i, const ModelParams& params) {
    params.validate();
    if (i == n) {
        throw DomainError("raw_term: I = N has a vanishing denominator");
    }
    const double ipn = displacement_element(i, n, 2.0 * params.beta);   // <I_+|N_->
    const double imp = displacement_element(i, n, -2.0 * params.beta);  // <I_-|N_+>
    const double scale = params.omega0_ratio / (4.0 * (n - i));
    CorrectionTerm t;
    t.i = i;
    t.a_plus = scale * (ipn + imp);
    t.b_plus = scale * (ipn - imp);
    t.a_minus = scale * (-ipn + imp);
    t.b_minus = scale * (-ipn - imp);
    return t;
}

CorrectionSet correction_coefficients(int n, const ModelParams& params, const OverlapTable& table,
                                      const PerturbationOptions& options) {
    const auto retained = select_terms(n, table, options.policy);
    return correction_coefficients(n, params, table, retained, options);
}

CorrectionSet correction_coefficients(int n, const ModelParams& params, const OverlapTable& table,
                                      std::span<const int> retained,
                                      const PerturbationOptions& options) {
    params.validate();
    check_block(n, table);
    std::vector<int> indices(retained.begin(), retained.end());
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw DomainError("correction_coefficients: retained set has duplicates");
    }
    for (int i : indices) {
        if (i == n) {
            throw DomainError("correction_coefficients: retained set contains I = N (vanishing denominator)");
        }
        check_block(i, table);
    }

    CorrectionSet set;
    set.n = n;
    set.options = options;
    set.coefficients.reserve(indices.size());
    for (int i : indices) {
        if (options.denominators == Denominators::unsplit) {
            set.coefficients.push_back(closed_form_term(n, i, params, table));
        } else {
            CorrectionTerm t;
            t.i = i;
            auto coeff = [&](Branch s, Branch sp) {
                return cross_coupling(n, s, i, sp, params, table) /
                       denominator(n, s, i, sp, params, options.denominators);
            };
            t.a_plus = coeff(Branch::plus, Branch::plus);
            t.b_plus = coeff(Branch::plus, Branch::minus);
            t.a_minus = coeff(Branch::minus, Branch::plus);
            t.b_minus = coeff(Branch::minus, Branch::minus);
            set.coefficients.push_back(t);
        }
    }

    // Generic second-order sum over both intermediate branches.
    for (Branch s : {Branch::plus, Branch::minus}) {
        double sum = 0.0;
        for (int i : indices) {
            for (Branch sp : {Branch::plus, Branch::minus}) {
                const double v = cross_coupling(n, s, i, sp, params, table);
                if (v == 0.0) continue;
                sum += v * v / denominator(n, s, i, sp, params, options.denominators);
            }
        }
        set.shifts[s == Branch::plus ? 0 : 1] = sum;
    }
    return set;
}

CorrectedEnergies corrected_energies(int n, const ModelParams& params, const OverlapTable& table,
                                     const PerturbationOptions& options) {
    const CorrectionSet set = correction_coefficients(n, params, table, options);
    return {adiabatic_level(n, Branch::plus, params).energy + set.shift(Branch::plus),
            adiabatic_level(n, Branch::minus, params).energy + set.shift(Branch::minus)};
}

CorrectedLevel corrected_eigenvector(int n, Branch sign, const ModelParams& params,
                                     const OverlapTable& table, const PerturbationOptions& options) {
    const CorrectionSet set = correction_coefficients(n, params, table, options);
    CorrectedLevel level;
    level.base = adiabatic_level(n, sign, params);
    level.shift = set.shift(sign);
    level.corrected_energy = level.base.energy + level.shift;
    level.residually_degenerate = std::abs(level.base.omega_n) < 1e-12;

    AdiabaticState vec(table.max_n());
    vec.amplitude(n, sign) = 1.0;
    for (const auto& t : set.coefficients) {
        vec.amplitude(t.i, Branch::plus) = sign == Branch::plus ? t.a_plus : t.a_minus;
        vec.amplitude(t.i, Branch::minus) = sign == Branch::plus ? t.b_plus : t.b_minus;
    }
    if (options.renormalize) {
        vec.amplitudes /= vec.norm();
    }
    level.eigenvector = std::move(vec);
    return level;
}

} // namespace rabi
