#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cirkm {

// D datasets x M models accuracy table (percentages) feeding rank statistics.
struct AccuracyMatrix {
    std::vector<std::string> dataset_names;
    std::vector<std::string> model_names;
    Eigen::MatrixXd acc;

    int n_datasets() const { return static_cast<int>(acc.rows()); }
    int n_models() const { return static_cast<int>(acc.cols()); }
    void validate() const;

    // Per-model mean accuracy across datasets.
    std::vector<double> column_means() const;
};

AccuracyMatrix load_accuracy_csv(const std::filesystem::path& path);
void save_accuracy_csv(const AccuracyMatrix& m, const std::filesystem::path& path);

// Percentage of matching labels, in [0, 100].
double accuracy(const Eigen::VectorXi& y_true, const Eigen::VectorXi& y_pred);

// Average rank of each model across datasets; rank 1 is the highest accuracy,
// ties receive the mean of the ranks they span.
std::vector<double> average_ranks(const AccuracyMatrix& acc);

// Friedman chi-square statistic over average ranks:
//   chi2_F = (12 D / (M (M+1))) (sum_m r_m^2 - M (M+1)^2 / 4).
double friedman_chi2(std::span<const double> avg_ranks, int n_models, int n_datasets);

struct FriedmanResult {
    double chi2_f = 0.0;
    double f_f = 0.0;  // Iman-Davenport correction: (D-1) chi2 / (D (M-1) - chi2)
    std::pair<int, int> dof;  // ((M-1), (M-1)(D-1))
};

// Throws EvalError when chi2 reaches D(M-1) (perfect agreement), where the
// F statistic degenerates.
FriedmanResult friedman_test(std::span<const double> avg_ranks, int n_models, int n_datasets);

// Nemenyi critical difference q_alpha * sqrt(M(M+1)/(6D)) from an embedded
// table of two-tailed critical values; supports M in [2,10], alpha in
// {0.05, 0.10}.
double nemenyi_cd(int n_models, int n_datasets, double alpha);

struct StatsReport {
    std::vector<std::string> model_names;
    std::vector<double> avg_ranks;
    double chi2_f = 0.0;
    double f_f = 0.0;
    std::pair<int, int> dof;
    double alpha = 0.05;
    double cd = 0.0;
    // pairwise_significant[i][j]: |rank_i - rank_j| >= CD
    std::vector<std::vector<bool>> pairwise_significant;
};

StatsReport make_stats_report(const AccuracyMatrix& acc, double alpha = 0.05);

std::string stats_report_to_json(const StatsReport& report);
void print_stats_report(std::ostream& out, const StatsReport& report);

}  // namespace cirkm
