#pragma once

#include "cirkm/kernel.hpp"
#include "cirkm/solver.hpp"
#include "cirkm/weights.hpp"

#include <Eigen/Dense>

#include <string>

namespace cirkm {

enum class Weighting { uniform, class_informed };

std::string to_string(Weighting w);
Weighting weighting_from_string(const std::string& name);

// Display name of the corresponding machine ("RKM" / "CI-RKM").
std::string model_name(Weighting w);

struct ModelParams {
    double eta = 1.0;
    double lambda = 1.0;
    double xi = 1e-2;
    KernelSpec kernel;
    Weighting weighting = Weighting::class_informed;
    RadiusMode radius_mode = RadiusMode::centroid_max;

    void validate() const;
};

// Everything needed to evaluate the dual decision function
//   f(x) = (1/eta) sum_j alpha_j K(x_j, x) + b
// on new points: the dual coefficients, the bias, and the training inputs.
struct TrainedModel {
    ModelParams params;
    Eigen::MatrixXd X_train;
    Eigen::VectorXd alpha;  // alpha_j = y_j h_j
    double bias = 0.0;
    WeightVector train_weights;  // all ones for uniform weighting
};

// Fit on (X, y): builds the Gram matrix, computes the class-informed weights
// (or uniform ones), assembles and solves the bordered system.
TrainedModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                 const ModelParams& params);

// Fit with explicitly supplied per-sample weights, bypassing the weight
// computation. Passing all ones reproduces the uniform machine exactly.
TrainedModel fit_with_weights(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                              const ModelParams& params, const Eigen::VectorXd& weights);

// Decision values f(x) for each query row.
Eigen::VectorXd decision_function(const TrainedModel& model, const Eigen::MatrixXd& X_query);

// sign(f(x)) with sign(0) = +1.
Eigen::VectorXi predict(const TrainedModel& model, const Eigen::MatrixXd& X_query);

}  // namespace cirkm
