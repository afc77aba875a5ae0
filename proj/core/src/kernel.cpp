#include "cirkm/kernel.hpp"

#include "cirkm/errors.hpp"

#include <cmath>

namespace cirkm {

namespace {

// Integer power by repeated multiplication; deterministic across platforms.
double ipow(double base, int exponent) {
    double result = 1.0;
    double b = base;
    for (int e = exponent; e > 0; e /= 2) {
        if (e % 2 == 1) result *= b;
        b *= b;
    }
    return result;
}

void check_same_dim(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& x2) {
    if (x.size() != x2.size()) {
        throw InvalidInputError("kernel: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(x2.size()) + ")");
    }
}

double eval_from_products(const KernelSpec& spec, double xx, double yy, double xy) {
    switch (spec.family) {
        case KernelFamily::rbf: {
            double sq = xx + yy - 2.0 * xy;
            if (sq < 0.0) sq = 0.0;
            return std::exp(-spec.gamma * sq);
        }
        case KernelFamily::linear:
            return xy;
        case KernelFamily::polynomial:
            return ipow(xy + spec.coef0, spec.degree);
    }
    throw InvalidInputError("kernel: unknown family");
}

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::rbf: return "rbf";
        case KernelFamily::linear: return "linear";
        case KernelFamily::polynomial: return "polynomial";
    }
    return "?";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "rbf") return KernelFamily::rbf;
    if (name == "linear") return KernelFamily::linear;
    if (name == "polynomial") return KernelFamily::polynomial;
    throw InvalidInputError("unknown kernel family: " + name);
}

KernelSpec KernelSpec::rbf(double gamma) {
    KernelSpec s;
    s.family = KernelFamily::rbf;
    s.gamma = gamma;
    s.validate();
    return s;
}

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.family = KernelFamily::linear;
    return s;
}

KernelSpec KernelSpec::polynomial(int degree, double coef0) {
    KernelSpec s;
    s.family = KernelFamily::polynomial;
    s.degree = degree;
    s.coef0 = coef0;
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (family == KernelFamily::rbf && !(gamma > 0.0)) {
        throw InvalidInputError("KernelSpec: rbf requires gamma > 0");
    }
    if (family == KernelFamily::polynomial && degree < 1) {
        throw InvalidInputError("KernelSpec: polynomial requires degree >= 1");
    }
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2) {
    check_same_dim(x, x2);
    switch (spec.family) {
        case KernelFamily::rbf: {
            const double sq = (x - x2).squaredNorm();
            return std::exp(-spec.gamma * sq);
        }
        case KernelFamily::linear:
            return x.dot(x2);
        case KernelFamily::polynomial:
            return ipow(x.dot(x2) + spec.coef0, spec.degree);
    }
    throw InvalidInputError("kernel: unknown family");
}

GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    spec.validate();
    const Eigen::Index n = X.rows();
    if (n < 1) throw InvalidInputError("gram_matrix: need at least one sample");

    GramMatrix gram;
    gram.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel_eval(spec, X.row(i).transpose(), X.row(j).transpose());
            gram.values(i, j) = v;
            gram.values(j, i) = v;
        }
    }
    return gram;
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& X_train,
                           const Eigen::MatrixXd& X_query) {
    spec.validate();
    if (X_query.rows() > 0 && X_train.cols() != X_query.cols()) {
        throw InvalidInputError("cross_gram: feature dimension mismatch (" +
                                std::to_string(X_train.cols()) + " vs " +
                                std::to_string(X_query.cols()) + ")");
    }
    Eigen::MatrixXd out(X_train.rows(), X_query.rows());
    for (Eigen::Index j = 0; j < X_train.rows(); ++j) {
        for (Eigen::Index q = 0; q < X_query.rows(); ++q) {
            out(j, q) = kernel_eval(spec, X_train.row(j).transpose(), X_query.row(q).transpose());
        }
    }
    return out;
}

double feature_distance(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& x2) {
    check_same_dim(x, x2);
    const double kxx = kernel_eval(spec, x, x);
    const double kyy = kernel_eval(spec, x2, x2);
    const double kxy = kernel_eval(spec, x, x2);
    double sq = kxx + kyy - 2.0 * kxy;
    if (sq < 0.0) sq = 0.0;
    return std::sqrt(sq);
}

Eigen::MatrixXd inner_products(const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd inner(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = X.row(i).dot(X.row(j));
            inner(i, j) = v;
            inner(j, i) = v;
        }
    }
    return inner;
}

Eigen::MatrixXd cross_gram_from_inner(const KernelSpec& spec,
                                      const Eigen::VectorXd& train_sq_norms,
                                      const Eigen::VectorXd& query_sq_norms,
                                      const Eigen::MatrixXd& cross_inner) {
    spec.validate();
    if (cross_inner.rows() != train_sq_norms.size() ||
        cross_inner.cols() != query_sq_norms.size()) {
        throw InvalidInputError("cross_gram_from_inner: shape mismatch");
    }
    Eigen::MatrixXd out(cross_inner.rows(), cross_inner.cols());
    for (Eigen::Index j = 0; j < cross_inner.rows(); ++j) {
        for (Eigen::Index q = 0; q < cross_inner.cols(); ++q) {
            out(j, q) = eval_from_products(spec, train_sq_norms(j), query_sq_norms(q),
                                           cross_inner(j, q));
        }
    }
    return out;
}

GramMatrix gram_from_inner(const KernelSpec& spec, const Eigen::MatrixXd& inner) {
    spec.validate();
    const Eigen::Index n = inner.rows();
    if (n < 1) throw InvalidInputError("gram_from_inner: need at least one sample");

    GramMatrix gram;
    gram.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = eval_from_products(spec, inner(i, i), inner(j, j), inner(i, j));
            gram.values(i, j) = v;
            gram.values(j, i) = v;
        }
    }
    return gram;
}

}  // namespace cirkm
