#pragma once

#include <Eigen/Dense>

#include <string>

namespace cirkm {

enum class KernelFamily { rbf, linear, polynomial };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Kernel family plus parameters; the sole home of the implicit feature map.
struct KernelSpec {
    KernelFamily family = KernelFamily::rbf;
    double gamma = 1.0;  // rbf: K(x,y) = exp(-gamma * ||x-y||^2)
    int degree = 3;      // polynomial only
    double coef0 = 1.0;  // polynomial only

    static KernelSpec rbf(double gamma);
    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double coef0 = 1.0);

    // Throws InvalidInputError on nonsensical parameters
    // (gamma <= 0 for rbf, degree < 1 for polynomial).
    void validate() const;
};

// Symmetric N x N matrix of kernel evaluations between training samples.
struct GramMatrix {
    Eigen::MatrixXd values;

    Eigen::Index n() const { return values.rows(); }
};

// Single kernel evaluation K(x, x2). Symmetric in its arguments.
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2);

// Gram matrix of the rows of X. Only the upper triangle is evaluated and
// then mirrored, so the result is exactly symmetric.
GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X);

// N x Q matrix with entry (j, q) = K(X_train.row(j), X_query.row(q)).
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& X_train,
                           const Eigen::MatrixXd& X_query);

// Feature-space distance computed through the kernel trick:
//   ||sigma(x) - sigma(x2)|| = sqrt(K(x,x) + K(x2,x2) - 2 K(x,x2)).
// The sqrt argument is clamped at zero to absorb roundoff.
double feature_distance(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& x2);

// Matrix of pairwise inner products X X^T, upper triangle mirrored.
// Every kernel family factors through it, which lets cross-validation
// reuse one matrix per fold across the whole kernel-parameter grid.
Eigen::MatrixXd inner_products(const Eigen::MatrixXd& X);

// Gram matrix derived from precomputed inner products.
GramMatrix gram_from_inner(const KernelSpec& spec, const Eigen::MatrixXd& inner);

// Train-vs-query kernel block derived from cached products: cross_inner is
// X_train X_query^T and the two norm vectors hold the row-wise squared norms.
Eigen::MatrixXd cross_gram_from_inner(const KernelSpec& spec,
                                      const Eigen::VectorXd& train_sq_norms,
                                      const Eigen::VectorXd& query_sq_norms,
                                      const Eigen::MatrixXd& cross_inner);

}  // namespace cirkm
