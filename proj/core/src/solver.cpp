#include "cirkm/solver.hpp"

#include "cirkm/errors.hpp"

#include <cmath>
#include <utility>

namespace cirkm {

namespace {

void check_labels(const Eigen::VectorXi& y, Eigen::Index n) {
    if (y.size() != n) {
        throw InvalidInputError("assemble: label count does not match Gram size");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y(i) != 1 && y(i) != -1) {
            throw InvalidInputError("assemble: labels must be -1 or +1");
        }
    }
}

BorderedSystem assemble_impl(const GramMatrix& gram, const Eigen::VectorXd& weights,
                             const Eigen::VectorXi& y, double eta, double lambda) {
    const Eigen::Index n = gram.n();
    check_labels(y, n);
    if (!(eta > 0.0)) throw InvalidInputError("assemble: eta must be positive");
    if (!(lambda > 0.0)) throw InvalidInputError("assemble: lambda must be positive");
    if (weights.size() != n) {
        throw InvalidInputError("assemble: weight count does not match Gram size");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(weights(i) > 0.0)) {
            throw InvalidInputError("assemble: weights must be strictly positive");
        }
    }

    BorderedSystem sys;
    sys.n = n;
    sys.lhs.resize(n + 1, n + 1);
    sys.lhs.topLeftCorner(n, n) = gram.values / eta;
    for (Eigen::Index i = 0; i < n; ++i) {
        sys.lhs(i, i) += lambda / weights(i);
        sys.lhs(i, n) = 1.0;
        sys.lhs(n, i) = 1.0;
    }
    sys.lhs(n, n) = 0.0;

    sys.rhs.resize(n + 1);
    sys.rhs.head(n) = y.cast<double>();
    sys.rhs(n) = 0.0;
    return sys;
}

// Row-equilibrated LU factorization with partial pivoting. Factors are kept
// so that iterative refinement can reuse them.
class EquilibratedLu {
public:
    explicit EquilibratedLu(const Eigen::MatrixXd& a)
        : lu_(a), scale_(a.rows()), perm_(a.rows()) {
        const Eigen::Index m = a.rows();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double s = lu_.row(i).cwiseAbs().maxCoeff();
            if (!(s > 0.0)) {
                throw SingularSystemError("solve: zero row in system", 0.0);
            }
            lu_.row(i) /= s;
            scale_(i) = s;
            perm_(i) = i;
        }
        for (Eigen::Index col = 0; col < m; ++col) {
            Eigen::Index piv = col;
            double piv_abs = std::abs(lu_(col, col));
            for (Eigen::Index r = col + 1; r < m; ++r) {
                const double v = std::abs(lu_(r, col));
                if (v > piv_abs) {
                    piv_abs = v;
                    piv = r;
                }
            }
            if (piv_abs < kSingularPivotTol) {
                throw SingularSystemError(
                    "solve: system numerically singular (pivot " + std::to_string(piv_abs) +
                        " below threshold after equilibration)",
                    piv_abs);
            }
            if (piv != col) {
                lu_.row(piv).swap(lu_.row(col));
                std::swap(perm_(piv), perm_(col));
            }
            for (Eigen::Index r = col + 1; r < m; ++r) {
                const double factor = lu_(r, col) / lu_(col, col);
                lu_(r, col) = factor;
                for (Eigen::Index c = col + 1; c < m; ++c) {
                    lu_(r, c) -= factor * lu_(col, c);
                }
            }
        }
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        const Eigen::Index m = lu_.rows();
        Eigen::VectorXd x(m);
        // apply row scaling and permutation, then forward substitution
        for (Eigen::Index i = 0; i < m; ++i) {
            x(i) = b(perm_(i)) / scale_(perm_(i));
        }
        for (Eigen::Index i = 1; i < m; ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                x(i) -= lu_(i, j) * x(j);
            }
        }
        for (Eigen::Index i = m - 1; i >= 0; --i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                x(i) -= lu_(i, j) * x(j);
            }
            x(i) /= lu_(i, i);
        }
        return x;
    }

private:
    Eigen::MatrixXd lu_;
    Eigen::VectorXd scale_;
    Eigen::VectorXi perm_;
};

double relative_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
    const double num = (a * x - b).norm();
    return num / std::max(b.norm(), 1.0);
}

}  // namespace

BorderedSystem assemble(const GramMatrix& gram, const WeightVector& weights,
                        const Eigen::VectorXi& y, double eta, double lambda) {
    return assemble_impl(gram, weights.weights, y, eta, lambda);
}

BorderedSystem assemble(const GramMatrix& gram, const Eigen::VectorXi& y, double eta,
                        double lambda) {
    return assemble_impl(gram, Eigen::VectorXd::Ones(gram.n()), y, eta, lambda);
}

DualSolution solve(const BorderedSystem& system) {
    const Eigen::Index m = system.lhs.rows();
    if (m != system.lhs.cols() || m != system.rhs.size() || m != system.n + 1) {
        throw InvalidInputError("solve: malformed bordered system");
    }

    const EquilibratedLu lu(system.lhs);
    Eigen::VectorXd x = lu.solve(system.rhs);

    // A couple of refinement steps keep the residual small even when the
    // lambda/d_k diagonal spans many orders of magnitude.
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd r = system.rhs - system.lhs * x;
        if (r.norm() <= 1e-13 * std::max(system.rhs.norm(), 1.0)) break;
        x += lu.solve(r);
    }

    DualSolution sol;
    sol.alpha = x.head(system.n);
    sol.bias = x(system.n);
    sol.residual = relative_residual(system.lhs, x, system.rhs);
    return sol;
}

double residual(const BorderedSystem& system, const DualSolution& sol) {
    if (sol.alpha.size() != system.n) {
        throw InvalidInputError("residual: solution size does not match system");
    }
    Eigen::VectorXd x(system.n + 1);
    x.head(system.n) = sol.alpha;
    x(system.n) = sol.bias;
    return relative_residual(system.lhs, x, system.rhs);
}

}  // namespace cirkm
