#include "cirkm/weights.hpp"

#include "cirkm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cirkm {

std::string to_string(RadiusMode mode) {
    return mode == RadiusMode::centroid_max ? "centroid_max" : "pairwise_max";
}

RadiusMode radius_mode_from_string(const std::string& name) {
    if (name == "centroid_max") return RadiusMode::centroid_max;
    if (name == "pairwise_max") return RadiusMode::pairwise_max;
    throw InvalidInputError("unknown radius mode: " + name);
}

ClassGeometry make_class_geometry(const GramMatrix& gram,
                                  std::span<const Eigen::Index> class_indices) {
    if (class_indices.empty()) {
        throw InvalidInputError("class geometry: empty class");
    }
    ClassGeometry geo;
    geo.indices.assign(class_indices.begin(), class_indices.end());
    double sum = 0.0;
    for (Eigen::Index i : geo.indices) {
        for (Eigen::Index j : geo.indices) {
            sum += gram.values(i, j);
        }
    }
    const double nc = static_cast<double>(geo.indices.size());
    geo.pair_mean = sum / (nc * nc);
    return geo;
}

double centroid_distance_sq(const GramMatrix& gram, const ClassGeometry& geometry,
                            Eigen::Index k) {
    if (k < 0 || k >= gram.n()) {
        throw InvalidInputError("centroid_distance_sq: sample index out of range");
    }
    const double nc = static_cast<double>(geometry.indices.size());
    double row_sum = 0.0;
    for (Eigen::Index i : geometry.indices) {
        row_sum += gram.values(k, i);
    }
    const double sq = gram.values(k, k) - (2.0 / nc) * row_sum + geometry.pair_mean;
    return std::max(sq, 0.0);
}

double centroid_distance_sq(const GramMatrix& gram,
                            std::span<const Eigen::Index> class_indices, Eigen::Index k) {
    return centroid_distance_sq(gram, make_class_geometry(gram, class_indices), k);
}

double class_radius(const GramMatrix& gram, std::span<const Eigen::Index> class_indices,
                    RadiusMode mode) {
    if (class_indices.empty()) {
        throw InvalidInputError("class_radius: empty class");
    }
    if (class_indices.size() == 1) return 0.0;

    double max_sq = 0.0;
    if (mode == RadiusMode::centroid_max) {
        const ClassGeometry geo = make_class_geometry(gram, class_indices);
        for (Eigen::Index i : class_indices) {
            max_sq = std::max(max_sq, centroid_distance_sq(gram, geo, i));
        }
    } else {
        for (std::size_t a = 0; a < class_indices.size(); ++a) {
            for (std::size_t b = a + 1; b < class_indices.size(); ++b) {
                const Eigen::Index i = class_indices[a];
                const Eigen::Index j = class_indices[b];
                const double sq =
                    gram.values(i, i) + gram.values(j, j) - 2.0 * gram.values(i, j);
                max_sq = std::max(max_sq, sq);
            }
        }
    }
    return std::sqrt(std::max(max_sq, 0.0));
}

WeightVector compute_weights(const GramMatrix& gram, const Eigen::VectorXi& y, double xi,
                             RadiusMode mode) {
    const Eigen::Index n = gram.n();
    if (y.size() != n) {
        throw InvalidInputError("compute_weights: label count does not match Gram size");
    }
    if (!(xi > 0.0)) {
        throw InvalidInputError("compute_weights: xi must be positive");
    }

    std::vector<Eigen::Index> pos, neg;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y(i) == 1) {
            pos.push_back(i);
        } else if (y(i) == -1) {
            neg.push_back(i);
        } else {
            throw InvalidInputError("compute_weights: labels must be -1 or +1");
        }
    }
    if (pos.empty() || neg.empty()) {
        throw InvalidInputError("compute_weights: both classes must be nonempty");
    }

    WeightVector wv;
    wv.xi = xi;
    wv.radius_mode = mode;
    wv.weights.resize(n);

    for (const auto* cls : {&pos, &neg}) {
        const ClassGeometry geo = make_class_geometry(gram, *cls);
        const double radius = class_radius(gram, *cls, mode);
        for (Eigen::Index k : *cls) {
            const double dist = std::sqrt(centroid_distance_sq(gram, geo, k));
            double w = 1.0 - dist / (radius + xi);
            wv.weights(k) = std::max(w, kWeightFloor);
        }
    }
    return wv;
}

}  // namespace cirkm
