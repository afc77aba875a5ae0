#include "cirkm/solver.hpp"

#include "cirkm/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cirkm;

namespace {

// The 2-point linear-kernel fixture: X = {1, -1}, y = (+1, -1), eta = lambda = 1.
BorderedSystem two_point_system(int sign = 1) {
    Eigen::MatrixXd X(2, 1);
    X << 1, -1;
    Eigen::VectorXi y(2);
    y << sign, -sign;
    const auto gram = gram_matrix(KernelSpec::linear(), X);
    return assemble(gram, y, 1.0, 1.0);
}

GramMatrix random_gram(gen::Random& rng, Eigen::Index n) {
    const Eigen::MatrixXd X = rng.matrix(n, 3, -2, 2);
    return gram_matrix(KernelSpec::rbf(rng.log_uniform(0.1, 4.0)), X);
}

}  // namespace

TEST_CASE("assemble matches the hand-computed 2-point system") {
    const auto sys = two_point_system();
    CHECK(sys.n == 2);
    CHECK(sys.lhs(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sys.lhs(0, 1) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(sys.lhs(1, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(sys.lhs(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sys.lhs(0, 2) == 1.0);
    CHECK(sys.lhs(2, 0) == 1.0);
    CHECK(sys.lhs(2, 2) == 0.0);
    CHECK(sys.rhs(0) == 1.0);
    CHECK(sys.rhs(1) == -1.0);
    CHECK(sys.rhs(2) == 0.0);
}

TEST_CASE("assemble with uniform weights adds a constant diagonal") {
    gen::Random rng(31);
    const auto gram = random_gram(rng, 6);
    Eigen::VectorXi y(6);
    y << 1, 1, 1, -1, -1, -1;
    const double eta = 0.7, lambda = 2.5;
    const auto sys = assemble(gram, y, eta, lambda);
    for (Eigen::Index i = 0; i < 6; ++i) {
        CHECK(sys.lhs(i, i) ==
              doctest::Approx(gram.values(i, i) / eta + lambda).epsilon(1e-15));
    }

    WeightVector ones;
    ones.weights = Eigen::VectorXd::Ones(6);
    const auto sys2 = assemble(gram, ones, y, eta, lambda);
    CHECK((sys.lhs - sys2.lhs).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sys.rhs - sys2.rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("halving one weight doubles that diagonal addition") {
    gen::Random rng(32);
    const auto gram = random_gram(rng, 5);
    Eigen::VectorXi y(5);
    y << 1, -1, 1, -1, 1;
    WeightVector w;
    w.weights = Eigen::VectorXd::Constant(5, 0.8);
    const auto sys1 = assemble(gram, w, y, 1.0, 1.0);
    w.weights(2) /= 2.0;
    const auto sys2 = assemble(gram, w, y, 1.0, 1.0);
    const double add1 = sys1.lhs(2, 2) - gram.values(2, 2);
    const double add2 = sys2.lhs(2, 2) - gram.values(2, 2);
    CHECK(add2 == doctest::Approx(2.0 * add1).epsilon(1e-12));
}

TEST_CASE("assemble input validation") {
    gen::Random rng(33);
    const auto gram = random_gram(rng, 4);
    Eigen::VectorXi y(4);
    y << 1, -1, 1, -1;
    CHECK_THROWS_AS(assemble(gram, y, 0.0, 1.0), InvalidInputError);
    CHECK_THROWS_AS(assemble(gram, y, 1.0, 0.0), InvalidInputError);
    CHECK_THROWS_AS(assemble(gram, y, 1.0, -2.0), InvalidInputError);
    WeightVector w;
    w.weights = Eigen::VectorXd::Ones(4);
    w.weights(1) = 0.0;
    CHECK_THROWS_AS(assemble(gram, w, y, 1.0, 1.0), InvalidInputError);
    Eigen::VectorXi bad(4);
    bad << 1, 2, -1, 1;
    CHECK_THROWS_AS(assemble(gram, bad, 1.0, 1.0), InvalidInputError);
}

TEST_CASE("solve: analytic 2-point fixture against exact-fraction elimination") {
    using oracle::Fraction;
    // [[2,-1,1],[-1,2,1],[1,1,0]] x = [1,-1,0]
    std::vector<std::vector<Fraction>> a = {
        {Fraction(2), Fraction(-1), Fraction(1)},
        {Fraction(-1), Fraction(2), Fraction(1)},
        {Fraction(1), Fraction(1), Fraction(0)},
    };
    std::vector<Fraction> b = {Fraction(1), Fraction(-1), Fraction(0)};
    const auto exact = oracle::solve_exact(a, b);
    CHECK(exact[0] == Fraction(1, 3));
    CHECK(exact[1] == Fraction(-1, 3));
    CHECK(exact[2] == Fraction(0));

    const auto sol = solve(two_point_system());
    CHECK(sol.alpha(0) == doctest::Approx(exact[0].value()).epsilon(1e-12));
    CHECK(sol.alpha(1) == doctest::Approx(exact[1].value()).epsilon(1e-12));
    CHECK(sol.bias == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.residual <= 1e-12);
}

TEST_CASE("solve: negating the labels negates the solution") {
    const auto pos = solve(two_point_system(1));
    const auto neg = solve(two_point_system(-1));
    CHECK(neg.alpha(0) == doctest::Approx(-pos.alpha(0)).epsilon(1e-12));
    CHECK(neg.alpha(1) == doctest::Approx(-pos.alpha(1)).epsilon(1e-12));
    CHECK(neg.bias == doctest::Approx(-pos.bias).epsilon(1e-12));
}

TEST_CASE("property: random systems agree with the Gauss-Jordan inversion oracle") {
    gen::Random rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.uniform_int(2, 20));
        const auto gram = random_gram(rng, n);
        Eigen::VectorXi y(n);
        bool has_pos = false, has_neg = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            y(i) = rng.uniform01() < 0.5 ? 1 : -1;
            (y(i) == 1 ? has_pos : has_neg) = true;
        }
        if (!has_pos) y(0) = 1;
        if (!has_neg) y(n - 1) = -1;
        WeightVector w;
        w.weights.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) w.weights(i) = rng.log_uniform(1e-6, 1.0);
        const double eta = rng.log_uniform(1e-2, 1e2);
        const double lambda = rng.log_uniform(1e-3, 1e3);

        const auto sys = assemble(gram, w, y, eta, lambda);
        const auto sol = solve(sys);

        const Eigen::MatrixXd inv = oracle::gauss_jordan_inverse(sys.lhs);
        const Eigen::VectorXd expect = inv * sys.rhs;
        Eigen::VectorXd got(n + 1);
        got.head(n) = sol.alpha;
        got(n) = sol.bias;
        const double rel = (got - expect).norm() / std::max(expect.norm(), 1.0);
        CHECK(rel <= 1e-8);

        CHECK(std::abs(sol.alpha.sum()) <= 1e-8 * std::max(sol.alpha.lpNorm<1>(), 1e-30));
        CHECK(sol.residual <= 1e-8);
    }
}

TEST_CASE("property: weighted conjugate duality inequality") {
    // (1/(2 lambda)) e^T D e + (lambda/2) h^T D^-1 h >= e^T h
    gen::Random rng(35);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.uniform_int(1, 10));
        const Eigen::VectorXd e = rng.vector(n, -10, 10);
        const Eigen::VectorXd h = rng.vector(n, -10, 10);
        const double lambda = rng.log_uniform(1e-3, 1e3);
        Eigen::VectorXd d(n);
        for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.log_uniform(1e-6, 1.0);

        const double lhs = e.cwiseProduct(d.cwiseProduct(e)).sum() / (2.0 * lambda) +
                           lambda / 2.0 * h.cwiseProduct(h.cwiseQuotient(d)).sum();
        const double rhs = e.dot(h);
        CHECK(lhs - rhs >= -1e-9 * (std::abs(lhs) + std::abs(rhs)));
    }
}

TEST_CASE("outlier suppression: a tiny weight shrinks its dual coefficient") {
    gen::Random rng(36);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.uniform_int(8, 24));
        const auto gram = random_gram(rng, n);
        Eigen::VectorXi y(n);
        for (Eigen::Index i = 0; i < n; ++i) y(i) = i % 2 == 0 ? 1 : -1;
        WeightVector w;
        w.weights = Eigen::VectorXd::Ones(n);
        const Eigen::Index k = static_cast<Eigen::Index>(rng.uniform_int(0, static_cast<int>(n) - 1));
        w.weights(k) = 1e-8;
        const auto sol = solve(assemble(gram, w, y, 1.0, 1.0));
        const double max_alpha = sol.alpha.cwiseAbs().maxCoeff();
        CHECK(std::abs(sol.alpha(k)) <= 1e-4 * max_alpha);
    }
}

TEST_CASE("residual") {
    const auto sys = two_point_system();
    auto sol = solve(sys);
    CHECK(residual(sys, sol) <= 1e-12);

    auto perturbed = sol;
    perturbed.alpha.array() += 1.0;
    CHECK(residual(sys, perturbed) > 0.0);

    BorderedSystem zero;
    zero.n = 2;
    zero.lhs = Eigen::MatrixXd::Identity(3, 3);
    zero.rhs = Eigen::VectorXd::Zero(3);
    DualSolution null_sol;
    null_sol.alpha = Eigen::VectorXd::Zero(2);
    null_sol.bias = 0.0;
    CHECK(residual(zero, null_sol) == 0.0);
}

TEST_CASE("singular systems are reported with the failing pivot") {
    BorderedSystem sys;
    sys.n = 2;
    sys.lhs.resize(3, 3);
    // two identical rows -> rank deficient
    sys.lhs << 1, 1, 1, 1, 1, 1, 1, 1, 0;
    sys.rhs.resize(3);
    sys.rhs << 1, -1, 0;
    CHECK_THROWS_AS(solve(sys), SingularSystemError);
    try {
        solve(sys);
    } catch (const SingularSystemError& e) {
        CHECK(e.pivot() < kSingularPivotTol);
    }
}
