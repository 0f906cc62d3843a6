#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "rabi/eigensolver.hpp"
#include "rabi/errors.hpp"

using rabi::eigendecompose;
using rabi::EigenPairs;

namespace {

void check_pairs(const Eigen::MatrixXd& a, const EigenPairs& e) {
    const Eigen::Index n = a.rows();
    const Eigen::MatrixXd gram = e.vectors.transpose() * e.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(rabi::max_residual(a, e) <= 1e-10 * std::max(1.0, e.values.cwiseAbs().maxCoeff()));
    for (Eigen::Index j = 1; j < n; ++j) CHECK(e.values(j - 1) <= e.values(j));
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index idx = 0;
        e.vectors.col(j).cwiseAbs().maxCoeff(&idx);
        CHECK(e.vectors(idx, j) > 0.0);
    }
}

} // namespace

TEST_CASE("identity") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
    const EigenPairs e = eigendecompose(id);
    CHECK(e.values == Eigen::VectorXd::Ones(5));
    check_pairs(id, e);
}

TEST_CASE("two-level block") {
    const double w = 0.137;
    Eigen::MatrixXd a(2, 2);
    a << 0.0, w, w, 0.0;
    const EigenPairs e = eigendecompose(a);
    CHECK(e.values(0) == doctest::Approx(-w).epsilon(1e-15));
    CHECK(e.values(1) == doctest::Approx(w).epsilon(1e-15));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(e.vectors(0, 0)) - r) <= 1e-15);
    CHECK(std::abs(e.vectors(0, 1) - r) <= 1e-15);
    CHECK(std::abs(e.vectors(1, 1) - r) <= 1e-15);
    CHECK(e.vectors(0, 0) * e.vectors(1, 0) < 0.0);
}

TEST_CASE("random symmetric matrices against characteristic-polynomial roots") {
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 2024ULL}) {
        const Eigen::MatrixXd a = oracle::random_symmetric(6, seed);
        const EigenPairs e = eigendecompose(a);
        check_pairs(a, e);
        const double bound = a.cwiseAbs().rowwise().sum().maxCoeff() + 0.1;
        const auto roots = oracle::bisect_roots([&](double x) { return oracle::char_poly(a, x); }, -bound, bound);
        REQUIRE(roots.size() == 6);
        for (int j = 0; j < 6; ++j) CHECK(std::abs(roots[static_cast<std::size_t>(j)] - e.values(j)) <= 1e-9);
    }
}

TEST_CASE("larger matrices and degenerate spectra") {
    const Eigen::MatrixXd a = oracle::random_symmetric(60, 99);
    check_pairs(a, eigendecompose(a));

    // Exact double degeneracy.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
    d(0, 0) = d(1, 1) = 2.0;
    d(2, 2) = d(3, 3) = -1.0;
    d(0, 1) = d(1, 0) = 0.0;
    const Eigen::MatrixXd q = eigendecompose(oracle::random_symmetric(4, 5)).vectors;
    const Eigen::MatrixXd rotated = q * d * q.transpose();
    const Eigen::MatrixXd sym = 0.5 * (rotated + rotated.transpose());
    const EigenPairs e = eigendecompose(sym);
    CHECK(std::abs(e.values(0) + 1.0) <= 1e-13);
    CHECK(std::abs(e.values(1) + 1.0) <= 1e-13);
    CHECK(std::abs(e.values(2) - 2.0) <= 1e-13);
    CHECK(std::abs(e.values(3) - 2.0) <= 1e-13);
    check_pairs(sym, e);
}

TEST_CASE("determinism") {
    const Eigen::MatrixXd a = oracle::random_symmetric(40, 3);
    const EigenPairs e1 = eigendecompose(a);
    const EigenPairs e2 = eigendecompose(a);
    CHECK(e1.values == e2.values);
    CHECK(e1.vectors == e2.vectors);
    CHECK(e1.sweeps == e2.sweeps);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(eigendecompose(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
    Eigen::MatrixXd ns(2, 2);
    ns << 1.0, 2.0, 2.5, 1.0;
    CHECK_THROWS_AS(eigendecompose(ns), std::invalid_argument);
    rabi::JacobiOptions tight;
    tight.max_sweeps = 1;
    CHECK_THROWS_AS(eigendecompose(oracle::random_symmetric(20, 11), tight), rabi::ConvergenceError);
    CHECK(eigendecompose(Eigen::MatrixXd::Zero(0, 0)).values.size() == 0);
}
