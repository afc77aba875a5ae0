#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cirkm {

// A loaded binary-classification dataset with labels in {-1, +1}.
struct Dataset {
    std::string name;
    Eigen::MatrixXd X;
    Eigen::VectorXi y;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
};

// Seeded stratified fold assignment: assignments[i] is the fold of sample i.
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignments;

    std::vector<Eigen::Index> test_indices(int fold) const;
    std::vector<Eigen::Index> train_indices(int fold) const;
};

std::string fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const std::string& text);

// Load a CSV dataset. A header row is required; features must be numeric.
// The label column (last by default, or `label_column` 0-based) may hold
// {0,1}, {-1,1}, or two distinct strings; it is mapped to {-1,+1} with the
// numerically or lexicographically smaller value becoming -1.
Dataset load_csv(const std::filesystem::path& path, int label_column = -1);

// Per-feature affine transform fitted on a training set: zero mean, unit
// variance; zero-variance features map to 0.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;  // 0 marks a constant feature

    static Standardizer fit(const Eigen::MatrixXd& X);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

struct StandardizeResult {
    Dataset train;
    std::vector<Dataset> others;
    Standardizer stats;
};

// Standardize `train` with its own statistics and every dataset in `others`
// with the training statistics (never their own).
StandardizeResult standardize(const Dataset& train, const std::vector<Dataset>& others = {});

// Deterministic stratified k-fold split. Every class must have at least k
// members; per-fold class counts differ from an even split by at most one.
FoldPlan stratified_kfold(const Eigen::VectorXi& y, int k, std::uint64_t seed);

struct NoiseResult {
    Eigen::VectorXi y;
    std::vector<Eigen::Index> flipped;  // ascending, for reproducibility audits
};

// Flip the labels of round(fraction * N) distinct samples chosen uniformly
// without replacement by the seeded generator. fraction must be in [0, 1).
NoiseResult inject_label_noise(const Eigen::VectorXi& y, double fraction, std::uint64_t seed);

std::string flips_to_json(const std::vector<Eigen::Index>& flipped);

}  // namespace cirkm
