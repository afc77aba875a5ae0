#pragma once

#include "cirkm/kernel.hpp"
#include "cirkm/weights.hpp"

#include <Eigen/Dense>

namespace cirkm {

// A pivot below this value after row equilibration marks the system as
// singular; grid search rejects the hyperparameter combination instead of
// producing garbage.
inline constexpr double kSingularPivotTol = 1e-14;

// The (N+1) x (N+1) system
//   [ (1/eta) M + diag(lambda / d_k)   1_N ] [ alpha ]   [ y ]
//   [          1_N^T                    0  ] [  b    ] = [ 0 ]
// whose solution carries the dual coefficients alpha_j = y_j h_j and the bias.
struct BorderedSystem {
    Eigen::MatrixXd lhs;
    Eigen::VectorXd rhs;
    Eigen::Index n = 0;  // sample count (lhs is (n+1) x (n+1))
};

struct DualSolution {
    Eigen::VectorXd alpha;
    double bias = 0.0;
    double residual = 0.0;  // relative residual of the solve
};

// Assemble the system with per-sample weights. Uniform weights (all ones)
// reproduce the unweighted machine exactly.
BorderedSystem assemble(const GramMatrix& gram, const WeightVector& weights,
                        const Eigen::VectorXi& y, double eta, double lambda);

// Uniform-weight overload.
BorderedSystem assemble(const GramMatrix& gram, const Eigen::VectorXi& y, double eta,
                        double lambda);

// Dense factorization with partial pivoting after row equilibration (each row
// scaled by its max absolute entry, taming the lambda/d_k spread). Throws
// SingularSystemError when a pivot falls below kSingularPivotTol.
DualSolution solve(const BorderedSystem& system);

// Relative residual ||lhs * sol - rhs||_2 / max(||rhs||_2, 1).
double residual(const BorderedSystem& system, const DualSolution& sol);

}  // namespace cirkm
