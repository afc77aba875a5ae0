#include "cirkm/kernel.hpp"

#include "cirkm/errors.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace cirkm;

namespace {
Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("kernel_eval closed forms") {
    const auto x = vec2(0.3, -2.0);
    CHECK(kernel_eval(KernelSpec::rbf(1.0), x, x) == 1.0);

    Eigen::VectorXd a = vec2(1, 2), b = vec2(3, 4);
    CHECK(kernel_eval(KernelSpec::linear(), a, b) == doctest::Approx(11.0).epsilon(1e-15));

    // rbf(gamma=0.5), ||(0,0)-(2,0)||^2 = 4 -> exp(-2)
    CHECK(kernel_eval(KernelSpec::rbf(0.5), vec2(0, 0), vec2(2, 0)) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    Eigen::VectorXd p(1), q(1);
    p << 2.0;
    q << 0.5;
    CHECK(kernel_eval(KernelSpec::polynomial(3, 1.0), p, q) ==
          doctest::Approx(8.0).epsilon(1e-15));  // (1 + 1)^3
}

TEST_CASE("kernel_eval rejects dimension mismatch") {
    Eigen::VectorXd a(2), b(3);
    a.setZero();
    b.setZero();
    CHECK_THROWS_AS(kernel_eval(KernelSpec::rbf(1.0), a, b), InvalidInputError);
}

TEST_CASE("KernelSpec validation") {
    CHECK_THROWS_AS(KernelSpec::rbf(0.0), InvalidInputError);
    CHECK_THROWS_AS(KernelSpec::rbf(-1.0), InvalidInputError);
    CHECK_THROWS_AS(KernelSpec::polynomial(0), InvalidInputError);
}

TEST_CASE("gram_matrix on identity-like rows") {
    Eigen::MatrixXd X(2, 2);
    X << 1, 0, 0, 1;
    const auto gram = gram_matrix(KernelSpec::linear(), X);
    CHECK(gram.values(0, 0) == 1.0);
    CHECK(gram.values(0, 1) == 0.0);
    CHECK(gram.values(1, 0) == 0.0);
    CHECK(gram.values(1, 1) == 1.0);
}

TEST_CASE("gram_matrix rbf closed form and duplicated rows") {
    Eigen::MatrixXd X(2, 2);
    X << 0, 0, 2, 0;
    const auto gram = gram_matrix(KernelSpec::rbf(0.5), X);
    CHECK(gram.values(0, 0) == 1.0);
    CHECK(gram.values(1, 1) == 1.0);
    CHECK(gram.values(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(gram.values(0, 1) == gram.values(1, 0));

    Eigen::MatrixXd Xd(3, 2);
    Xd << 0.5, -1, 0.5, -1, 2, 3;
    const auto gd = gram_matrix(KernelSpec::rbf(0.7), Xd);
    CHECK(gd.values.row(0) == gd.values.row(1));
    CHECK(gd.values.col(0) == gd.values.col(1));
    for (int i = 0; i < 3; ++i) CHECK(gd.values(i, i) == 1.0);
}

TEST_CASE("gram_matrix requires at least one sample") {
    Eigen::MatrixXd X(0, 2);
    CHECK_THROWS_AS(gram_matrix(KernelSpec::linear(), X), InvalidInputError);
}

TEST_CASE("cross_gram basics") {
    gen::Random rng(11);
    const Eigen::MatrixXd X = rng.matrix(6, 3);
    const auto spec = KernelSpec::rbf(0.8);

    SUBCASE("query equal to train reproduces the Gram matrix") {
        const auto gram = gram_matrix(spec, X);
        const auto cross = cross_gram(spec, X, X);
        CHECK((cross - gram.values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("single query equal to a training row reproduces that column") {
        const Eigen::MatrixXd q = X.row(2);
        const auto cross = cross_gram(spec, X, q);
        const auto gram = gram_matrix(spec, X);
        CHECK((cross.col(0) - gram.values.col(2)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("linear hand example") {
        Eigen::MatrixXd tr(2, 1), qu(1, 1);
        tr << 1, -1;
        qu << 2;
        const auto cross = cross_gram(KernelSpec::linear(), tr, qu);
        CHECK(cross(0, 0) == 2.0);
        CHECK(cross(1, 0) == -2.0);
    }
    SUBCASE("dimension mismatch") {
        Eigen::MatrixXd q(1, 2);
        q.setZero();
        CHECK_THROWS_AS(cross_gram(spec, X, q), InvalidInputError);
    }
}

TEST_CASE("feature_distance") {
    CHECK(feature_distance(KernelSpec::rbf(2.0), vec2(0.4, 1), vec2(0.4, 1)) == 0.0);
    // sqrt(2 - 2 e^-2) with the Gram entries from above
    CHECK(feature_distance(KernelSpec::rbf(0.5), vec2(0, 0), vec2(2, 0)) ==
          doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-2.0))).epsilon(1e-12));
    Eigen::VectorXd a(1), b(1);
    a << 3;
    b << 1;
    CHECK(feature_distance(KernelSpec::linear(), a, b) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("property: kernel symmetry") {
    gen::Random rng(42);
    const KernelSpec specs[] = {KernelSpec::rbf(0.3), KernelSpec::rbf(4.0),
                                KernelSpec::linear(), KernelSpec::polynomial(2, 0.5)};
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd a = rng.vector(5, -3, 3);
        const Eigen::VectorXd b = rng.vector(5, -3, 3);
        for (const auto& spec : specs) {
            CHECK(std::abs(kernel_eval(spec, a, b) - kernel_eval(spec, b, a)) <= 1e-12);
        }
    }
}

TEST_CASE("property: rbf boundedness, equality only at identical points") {
    gen::Random rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const double gamma = rng.log_uniform(1.0 / 32, 32.0);
        const Eigen::VectorXd a = rng.vector(4, -2, 2);
        Eigen::VectorXd b = rng.vector(4, -2, 2);
        const double k = kernel_eval(KernelSpec::rbf(gamma), a, b);
        CHECK(k > 0.0);
        CHECK(k <= 1.0);
        if ((a - b).norm() > 1e-3) CHECK(k < 1.0 - 1e-12);
        CHECK(kernel_eval(KernelSpec::rbf(gamma), a, a) == 1.0);
    }
}

TEST_CASE("property: linear feature_distance equals Euclidean distance") {
    gen::Random rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd a = rng.vector(6, -5, 5);
        const Eigen::VectorXd b = rng.vector(6, -5, 5);
        const double got = feature_distance(KernelSpec::linear(), a, b);
        const double expect = (a - b).norm();
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("property: Gram matrices are positive semidefinite") {
    gen::Random rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.uniform_int(2, 30));
        const auto d = static_cast<Eigen::Index>(rng.uniform_int(1, 6));
        const Eigen::MatrixXd X = rng.matrix(n, d, -2, 2);
        KernelSpec spec = KernelSpec::rbf(rng.log_uniform(1.0 / 32, 32.0));
        switch (trial % 3) {
            case 0: break;
            case 1: spec = KernelSpec::linear(); break;
            case 2: spec = KernelSpec::polynomial(2 + trial % 2, 1.0); break;
        }
        const auto gram = gram_matrix(spec, X);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.values);
        const double min_eig = eig.eigenvalues().minCoeff();
        const double bound = -1e-8 * gram.values.trace() / static_cast<double>(n);
        CHECK(min_eig >= bound);
    }
}

TEST_CASE("gram_from_inner and cross_gram_from_inner agree with the direct route") {
    gen::Random rng(46);
    const Eigen::MatrixXd X = rng.matrix(8, 3);
    const Eigen::MatrixXd Q = rng.matrix(5, 3);
    for (const auto& spec : {KernelSpec::rbf(0.6), KernelSpec::linear(),
                             KernelSpec::polynomial(2, 1.0)}) {
        const auto direct = gram_matrix(spec, X);
        const auto cached = gram_from_inner(spec, inner_products(X));
        CHECK((direct.values - cached.values).cwiseAbs().maxCoeff() <= 1e-12);

        const Eigen::MatrixXd inner = inner_products(X);
        Eigen::VectorXd qn(Q.rows());
        for (Eigen::Index i = 0; i < Q.rows(); ++i) qn(i) = Q.row(i).squaredNorm();
        const auto cross_direct = cross_gram(spec, X, Q);
        const auto cross_cached =
            cross_gram_from_inner(spec, inner.diagonal(), qn, X * Q.transpose());
        CHECK((cross_direct - cross_cached).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
