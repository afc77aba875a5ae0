#pragma once

// Deterministic random inputs for property tests. Built directly on
// mt19937_64 raw output (the engine is fully specified by the standard), so
// frozen assertions hold on any platform.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace gen {

class Random {
public:
    explicit Random(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double normal() {
        // Box-Muller; one value per call keeps the stream simple
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Eigen::VectorXd vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
        return v;
    }

    Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                           double hi = 1.0) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
        }
        return m;
    }

    // Two Gaussian blobs with both labels guaranteed present.
    std::pair<Eigen::MatrixXd, Eigen::VectorXi> blobs(Eigen::Index n, Eigen::Index d,
                                                      double separation = 2.0,
                                                      double spread = 1.0) {
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXi y(n);
        const Eigen::Index n_pos = n / 2 > 0 ? n / 2 : 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool pos = i < n_pos;
            y(i) = pos ? 1 : -1;
            for (Eigen::Index j = 0; j < d; ++j) {
                const double center = (j == 0 ? (pos ? separation / 2 : -separation / 2) : 0.0);
                X(i, j) = center + spread * normal();
            }
        }
        return {X, y};
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gen
