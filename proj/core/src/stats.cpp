#include "cirkm/stats.hpp"

#include "cirkm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cirkm {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
        while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
        fields.push_back(cur);
    }
    return fields;
}

// Two-tailed Nemenyi critical values for the studentized range at infinite
// degrees of freedom (already divided by sqrt(2)), indexed by model count.
constexpr int kQTableMinModels = 2;
constexpr int kQTableMaxModels = 10;
constexpr double kQ005[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
constexpr double kQ010[] = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};

}  // namespace

void AccuracyMatrix::validate() const {
    if (acc.rows() != static_cast<Eigen::Index>(dataset_names.size()) ||
        acc.cols() != static_cast<Eigen::Index>(model_names.size())) {
        throw InvalidInputError("AccuracyMatrix: name/value shape mismatch");
    }
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
        for (Eigen::Index j = 0; j < acc.cols(); ++j) {
            if (!std::isfinite(acc(i, j))) {
                throw InvalidInputError("AccuracyMatrix: missing entry at (" +
                                        dataset_names[static_cast<std::size_t>(i)] + ", " +
                                        model_names[static_cast<std::size_t>(j)] + ")");
            }
        }
    }
}

std::vector<double> AccuracyMatrix::column_means() const {
    std::vector<double> means(static_cast<std::size_t>(acc.cols()));
    for (Eigen::Index j = 0; j < acc.cols(); ++j) {
        means[static_cast<std::size_t>(j)] = acc.col(j).mean();
    }
    return means;
}

AccuracyMatrix load_accuracy_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open accuracy matrix: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw LoadError(path.string() + ": empty file");
    auto header = split_line(line);
    if (header.size() < 3) {
        throw LoadError(path.string() + ": need a dataset column and at least two models");
    }

    AccuracyMatrix m;
    m.model_names.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (fields.size() != header.size()) {
            throw LoadError(path.string() + ": line " + std::to_string(lineno) +
                            " has wrong field count");
        }
        m.dataset_names.push_back(fields[0]);
        std::vector<double> vals;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            double v;
            auto [ptr, ec] = std::from_chars(fields[j].data(), fields[j].data() + fields[j].size(), v);
            if (ec != std::errc() || ptr != fields[j].data() + fields[j].size()) {
                throw LoadError(path.string() + ": bad number '" + fields[j] + "' at line " +
                                std::to_string(lineno));
            }
            vals.push_back(v);
        }
        rows.push_back(std::move(vals));
    }
    if (rows.size() < 2) {
        throw LoadError(path.string() + ": need at least two dataset rows");
    }
    m.acc.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(m.model_names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m.acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    m.validate();
    return m;
}

void save_accuracy_csv(const AccuracyMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot write accuracy matrix: " + path.string());
    out << "dataset";
    for (const auto& name : m.model_names) out << "," << name;
    out << "\n";
    for (Eigen::Index i = 0; i < m.acc.rows(); ++i) {
        out << m.dataset_names[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m.acc.cols(); ++j) {
            out << "," << format_double(m.acc(i, j));
        }
        out << "\n";
    }
}

double accuracy(const Eigen::VectorXi& y_true, const Eigen::VectorXi& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw InvalidInputError("accuracy: length mismatch");
    }
    if (y_true.size() == 0) {
        throw InvalidInputError("accuracy: empty input");
    }
    Eigen::Index matches = 0;
    for (Eigen::Index i = 0; i < y_true.size(); ++i) {
        if (y_true(i) == y_pred(i)) ++matches;
    }
    return 100.0 * static_cast<double>(matches) / static_cast<double>(y_true.size());
}

std::vector<double> average_ranks(const AccuracyMatrix& matrix) {
    matrix.validate();
    const int d = matrix.n_datasets();
    const int m = matrix.n_models();
    std::vector<double> sums(static_cast<std::size_t>(m), 0.0);

    std::vector<int> order(static_cast<std::size_t>(m));
    for (int row = 0; row < d; ++row) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return matrix.acc(row, a) > matrix.acc(row, b);
        });
        // walk tie groups; members share the mean of the ranks they span
        int i = 0;
        while (i < m) {
            int j = i;
            while (j + 1 < m && matrix.acc(row, order[static_cast<std::size_t>(j + 1)]) ==
                                    matrix.acc(row, order[static_cast<std::size_t>(i)])) {
                ++j;
            }
            const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (int t = i; t <= j; ++t) {
                sums[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] += shared;
            }
            i = j + 1;
        }
    }
    for (auto& s : sums) s /= static_cast<double>(d);
    return sums;
}

double friedman_chi2(std::span<const double> avg_ranks, int n_models, int n_datasets) {
    if (n_models < 2 || n_datasets < 2) {
        throw InvalidInputError("friedman: need at least 2 models and 2 datasets");
    }
    if (static_cast<int>(avg_ranks.size()) != n_models) {
        throw InvalidInputError("friedman: rank count does not match model count");
    }
    const double m = n_models;
    const double d = n_datasets;
    double sumsq = 0.0;
    for (double r : avg_ranks) sumsq += r * r;
    return 12.0 * d / (m * (m + 1.0)) * (sumsq - m * (m + 1.0) * (m + 1.0) / 4.0);
}

FriedmanResult friedman_test(std::span<const double> avg_ranks, int n_models, int n_datasets) {
    FriedmanResult result;
    result.chi2_f = friedman_chi2(avg_ranks, n_models, n_datasets);
    const double d = n_datasets;
    const double m = n_models;
    const double denom = d * (m - 1.0) - result.chi2_f;
    if (denom <= 1e-12 * d * (m - 1.0)) {
        throw EvalError("friedman_test: degenerate ranking (chi2 = " +
                        std::to_string(result.chi2_f) +
                        " reaches D(M-1)); the F statistic is undefined");
    }
    result.f_f = (d - 1.0) * result.chi2_f / denom;
    result.dof = {n_models - 1, (n_models - 1) * (n_datasets - 1)};
    return result;
}

double nemenyi_cd(int n_models, int n_datasets, double alpha) {
    if (n_models < kQTableMinModels || n_models > kQTableMaxModels) {
        throw UnsupportedInputError("nemenyi_cd: model count " + std::to_string(n_models) +
                                    " outside table coverage [2,10]");
    }
    if (n_datasets < 1) throw InvalidInputError("nemenyi_cd: need at least one dataset");
    const double* table;
    if (std::abs(alpha - 0.05) < 1e-12) {
        table = kQ005;
    } else if (std::abs(alpha - 0.10) < 1e-12) {
        table = kQ010;
    } else {
        throw UnsupportedInputError("nemenyi_cd: alpha must be 0.05 or 0.10");
    }
    const double q = table[n_models - kQTableMinModels];
    const double m = n_models;
    return q * std::sqrt(m * (m + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

StatsReport make_stats_report(const AccuracyMatrix& acc, double alpha) {
    StatsReport report;
    report.model_names = acc.model_names;
    report.avg_ranks = average_ranks(acc);
    const auto fr = friedman_test(report.avg_ranks, acc.n_models(), acc.n_datasets());
    report.chi2_f = fr.chi2_f;
    report.f_f = fr.f_f;
    report.dof = fr.dof;
    report.alpha = alpha;
    report.cd = nemenyi_cd(acc.n_models(), acc.n_datasets(), alpha);

    const int m = acc.n_models();
    report.pairwise_significant.assign(static_cast<std::size_t>(m),
                                       std::vector<bool>(static_cast<std::size_t>(m), false));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double diff = std::abs(report.avg_ranks[static_cast<std::size_t>(i)] -
                                         report.avg_ranks[static_cast<std::size_t>(j)]);
            report.pairwise_significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                diff >= report.cd;
        }
    }
    return report;
}

std::string stats_report_to_json(const StatsReport& report) {
    nlohmann::json j;
    j["schema"] = "cirkm-stats-v1";
    j["model_names"] = report.model_names;
    j["avg_ranks"] = report.avg_ranks;
    j["chi2_f"] = report.chi2_f;
    j["f_f"] = report.f_f;
    j["dof"] = {report.dof.first, report.dof.second};
    j["alpha"] = report.alpha;
    j["cd"] = report.cd;
    nlohmann::json pw = nlohmann::json::array();
    for (const auto& row : report.pairwise_significant) {
        pw.push_back(std::vector<int>(row.begin(), row.end()));
    }
    j["pairwise_significant"] = pw;
    return j.dump(2);
}

void print_stats_report(std::ostream& out, const StatsReport& report) {
    const std::size_t m = report.model_names.size();
    // reference model = best (lowest) average rank
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (report.avg_ranks[i] < report.avg_ranks[best]) best = i;
    }

    out << "Average ranks (1 = best):\n";
    for (std::size_t i = 0; i < m; ++i) {
        out << "  " << std::left << std::setw(16) << report.model_names[i] << std::right
            << std::fixed << std::setprecision(4) << report.avg_ranks[i] << "\n";
    }
    out << "Friedman chi2_F = " << std::setprecision(4) << report.chi2_f
        << ", F_F = " << report.f_f << ", dof = (" << report.dof.first << ", "
        << report.dof.second << ")\n";
    out << "Nemenyi CD (alpha = " << std::setprecision(2) << report.alpha
        << ") = " << std::setprecision(4) << report.cd << "\n";
    out << "Pairwise vs " << report.model_names[best] << ":\n";
    for (std::size_t i = 0; i < m; ++i) {
        if (i == best) continue;
        const double diff = std::abs(report.avg_ranks[i] - report.avg_ranks[best]);
        out << "  " << std::left << std::setw(16) << report.model_names[i] << std::right
            << "rank diff " << std::setprecision(4) << diff << "  ->  "
            << (report.pairwise_significant[i][best] ? "significant" : "not significant")
            << "\n";
    }
    out.unsetf(std::ios::fixed);
}

}  // namespace cirkm
