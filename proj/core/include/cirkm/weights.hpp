#pragma once

#include "cirkm/kernel.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace cirkm {

// How the per-class radius is measured. The class-informed weight divides a
// sample's distance-to-centroid by (radius + xi); `centroid_max` takes the
// radius as the largest distance from the class centroid, `pairwise_max` as
// the class diameter.
enum class RadiusMode { centroid_max, pairwise_max };

std::string to_string(RadiusMode mode);
RadiusMode radius_mode_from_string(const std::string& name);

// Weights below this floor are raised to it so that diag(D) stays invertible
// in the solver, which divides by each weight.
inline constexpr double kWeightFloor = 1e-12;

// Per-sample class-informed weights, each in (0, 1].
struct WeightVector {
    Eigen::VectorXd weights;
    double xi = 1e-2;
    RadiusMode radius_mode = RadiusMode::centroid_max;

    Eigen::Index size() const { return weights.size(); }
};

// Kernel-space aggregates of one class, shared across the per-sample distance
// queries: row sums give the cross term, pair_mean the centroid norm term.
struct ClassGeometry {
    std::vector<Eigen::Index> indices;
    double pair_mean = 0.0;  // (1/Nc^2) sum_{i,j in class} M_ij
};

ClassGeometry make_class_geometry(const GramMatrix& gram,
                                  std::span<const Eigen::Index> class_indices);

// Squared feature-space distance from sample k to the class centroid,
// expanded through the kernel trick:
//   M_kk - (2/Nc) sum_{i in c} M_ki + (1/Nc^2) sum_{i,j in c} M_ij
// clamped at zero for roundoff.
double centroid_distance_sq(const GramMatrix& gram, const ClassGeometry& geometry,
                            Eigen::Index k);

// Convenience overload that builds the class aggregates on the fly.
double centroid_distance_sq(const GramMatrix& gram,
                            std::span<const Eigen::Index> class_indices, Eigen::Index k);

// Radius of a class in feature space; 0 for a singleton class.
double class_radius(const GramMatrix& gram, std::span<const Eigen::Index> class_indices,
                    RadiusMode mode);

// Class-informed weight of every training sample:
//   D(x_k) = 1 - ||sigma(x_k) - centroid_c|| / (radius_c + xi)
// where c is the class of x_k. All weights are in (0, 1].
WeightVector compute_weights(const GramMatrix& gram, const Eigen::VectorXi& y, double xi,
                             RadiusMode mode);

}  // namespace cirkm
