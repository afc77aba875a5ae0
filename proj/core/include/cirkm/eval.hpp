#pragma once

#include "cirkm/data.hpp"
#include "cirkm/model.hpp"
#include "cirkm/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cirkm {

// Hyperparameter grids for cross-validated search. An empty xi grid means the
// weight offset is not tuned and the supplied default is used.
struct GridSpec {
    std::vector<double> eta_grid{1.0};
    std::vector<double> lambda_grid;
    std::vector<double> gamma_grid;
    std::vector<double> xi_grid;

    // eta, lambda over {10^-5..10^5}; rbf gamma over {2^-5..2^5}.
    static GridSpec full_profile();
    // Desk-scale: eta fixed at 1, lambda and gamma gridded as above.
    static GridSpec fast_profile();
    static GridSpec from_name(const std::string& profile);

    void validate() const;
};

struct ConfigResult {
    ModelParams params;
    std::vector<double> fold_accuracies;  // NaN where the solve was singular
    double mean_accuracy = 0.0;           // -inf marks a rejected (singular) config
};

struct CvResult {
    std::vector<ConfigResult> per_config;
    ConfigResult best;
};

// Cross-validated grid search: for every grid point, fit on k-1 folds and
// test on the held-out fold, all k ways. Folds come from the seeded
// stratified split; features are standardized per fold with training-fold
// statistics. Singular configurations are kept in per_config with mean -inf
// and excluded from `best`; ties on mean accuracy break toward the smallest
// (lambda, gamma, eta, xi).
CvResult grid_search_cv(const Dataset& data, const GridSpec& grid, Weighting weighting,
                        int k, std::uint64_t seed, RadiusMode radius_mode = RadiusMode::centroid_max,
                        double default_xi = 1e-2);

// Same search against a prebuilt fold plan and per-fold fit labels (used by
// the label-noise ablation, which flips training labels after the split).
// y_fit_per_fold[f] is a full-length label vector; only its entries at the
// training indices of fold f are read. Held-out accuracy is always measured
// against the dataset's original labels.
CvResult grid_search_cv_plan(const Dataset& data, const FoldPlan& plan,
                             const std::vector<Eigen::VectorXi>& y_fit_per_fold,
                             const GridSpec& grid, Weighting weighting,
                             RadiusMode radius_mode = RadiusMode::centroid_max,
                             double default_xi = 1e-2);

struct CellResult {
    std::string dataset;
    std::string model;
    bool ok = false;
    std::string error;
    CvResult cv;
};

struct BenchmarkResult {
    AccuracyMatrix matrix;
    std::vector<CellResult> cells;
    int folds = 0;
    std::uint64_t seed = 0;
};

// One grid search per (dataset, model) cell; the matrix holds each cell's
// best mean accuracy. Cells are independent work units executed by `jobs`
// workers; results are keyed by cell index, so the output is identical for
// any worker count. Throws EvalError (after completing all cells) if any
// cell failed, listing the failures.
BenchmarkResult run_benchmark(const std::vector<Dataset>& datasets, const GridSpec& grid,
                              const std::vector<Weighting>& models, int k, std::uint64_t seed,
                              int jobs = 1, RadiusMode radius_mode = RadiusMode::centroid_max,
                              double default_xi = 1e-2);

struct AblationResult {
    std::vector<double> noise_levels;
    std::vector<BenchmarkResult> per_level;

    // Per-model mean accuracy across datasets at the given level.
    std::vector<double> level_averages(std::size_t level_index) const;
};

// Label-noise ablation: for each noise level, flip that fraction of training
// labels in every training fold (after the CV split; held-out labels stay
// clean) and rerun the benchmark. Level 0 reproduces run_benchmark exactly.
AblationResult run_ablation(const std::vector<Dataset>& datasets,
                            const std::vector<double>& noise_levels, const GridSpec& grid,
                            const std::vector<Weighting>& models, int k, std::uint64_t seed,
                            int jobs = 1, RadiusMode radius_mode = RadiusMode::centroid_max,
                            double default_xi = 1e-2);

// JSON export of a benchmark run: metadata plus per-cell best params, fold
// accuracies and mean. The timestamp is caller-supplied so that identical
// runs produce identical documents apart from that one field.
std::string benchmark_to_json(const BenchmarkResult& result, const GridSpec& grid,
                              const std::string& timestamp);

std::string ablation_to_json(const AblationResult& result, const GridSpec& grid,
                             const std::string& timestamp);

std::string cv_result_to_json(const CvResult& result);

}  // namespace cirkm
