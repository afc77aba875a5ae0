#include "cirkm/model.hpp"

#include "cirkm/errors.hpp"

namespace cirkm {

std::string to_string(Weighting w) {
    return w == Weighting::uniform ? "uniform" : "class_informed";
}

Weighting weighting_from_string(const std::string& name) {
    if (name == "uniform") return Weighting::uniform;
    if (name == "class_informed") return Weighting::class_informed;
    throw InvalidInputError("unknown weighting: " + name);
}

std::string model_name(Weighting w) {
    return w == Weighting::uniform ? "RKM" : "CI-RKM";
}

void ModelParams::validate() const {
    if (!(eta > 0.0)) throw InvalidInputError("ModelParams: eta must be positive");
    if (!(lambda > 0.0)) throw InvalidInputError("ModelParams: lambda must be positive");
    if (!(xi > 0.0)) throw InvalidInputError("ModelParams: xi must be positive");
    kernel.validate();
}

namespace {

TrainedModel fit_gram(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                      const ModelParams& params, const GramMatrix& gram,
                      WeightVector weights) {
    BorderedSystem sys = assemble(gram, weights, y, params.eta, params.lambda);
    DualSolution sol = solve(sys);

    TrainedModel model;
    model.params = params;
    model.X_train = X;
    model.alpha = std::move(sol.alpha);
    model.bias = sol.bias;
    model.train_weights = std::move(weights);
    return model;
}

void check_fit_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXi& y) {
    if (X.rows() < 2) throw InvalidInputError("fit: need at least two samples");
    if (y.size() != X.rows()) {
        throw InvalidInputError("fit: label count does not match sample count");
    }
}

}  // namespace

TrainedModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                 const ModelParams& params) {
    params.validate();
    check_fit_inputs(X, y);

    const GramMatrix gram = gram_matrix(params.kernel, X);
    WeightVector weights;
    if (params.weighting == Weighting::class_informed) {
        weights = compute_weights(gram, y, params.xi, params.radius_mode);
    } else {
        weights.weights = Eigen::VectorXd::Ones(X.rows());
        weights.xi = params.xi;
        weights.radius_mode = params.radius_mode;
    }
    return fit_gram(X, y, params, gram, std::move(weights));
}

TrainedModel fit_with_weights(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                              const ModelParams& params, const Eigen::VectorXd& weights) {
    params.validate();
    check_fit_inputs(X, y);
    if (weights.size() != X.rows()) {
        throw InvalidInputError("fit_with_weights: weight count does not match samples");
    }

    const GramMatrix gram = gram_matrix(params.kernel, X);
    WeightVector wv;
    wv.weights = weights;
    wv.xi = params.xi;
    wv.radius_mode = params.radius_mode;
    return fit_gram(X, y, params, gram, std::move(wv));
}

Eigen::VectorXd decision_function(const TrainedModel& model, const Eigen::MatrixXd& X_query) {
    if (X_query.rows() == 0) return Eigen::VectorXd(0);
    if (X_query.cols() != model.X_train.cols()) {
        throw InvalidInputError("decision_function: query dimension " +
                                std::to_string(X_query.cols()) + " does not match training " +
                                std::to_string(model.X_train.cols()));
    }
    const Eigen::MatrixXd k = cross_gram(model.params.kernel, model.X_train, X_query);
    return (k.transpose() * model.alpha) / model.params.eta +
           Eigen::VectorXd::Constant(X_query.rows(), model.bias);
}

Eigen::VectorXi predict(const TrainedModel& model, const Eigen::MatrixXd& X_query) {
    const Eigen::VectorXd f = decision_function(model, X_query);
    Eigen::VectorXi labels(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        labels(i) = f(i) >= 0.0 ? 1 : -1;
    }
    return labels;
}

}  // namespace cirkm
