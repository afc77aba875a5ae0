#include "cirkm/data.hpp"

#include "cirkm/errors.hpp"
#include "cirkm/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cirkm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    std::istringstream ss(line);
    while (std::getline(ss, current, ',')) {
        fields.push_back(trim(current));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<Eigen::Index> FoldPlan::test_indices(int fold) const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

std::vector<Eigen::Index> FoldPlan::train_indices(int fold) const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

std::string fold_plan_to_json(const FoldPlan& plan) {
    nlohmann::json j;
    j["k"] = plan.k;
    j["seed"] = plan.seed;
    j["assignments"] = plan.assignments;
    return j.dump();
}

FoldPlan fold_plan_from_json(const std::string& text) {
    FoldPlan plan;
    try {
        const auto j = nlohmann::json::parse(text);
        plan.k = j.at("k").get<int>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        plan.assignments = j.at("assignments").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("fold plan JSON: ") + e.what());
    }
    return plan;
}

std::string flips_to_json(const std::vector<Eigen::Index>& flipped) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i : flipped) j.push_back(i);
    return j.dump();
}

Dataset load_csv(const std::filesystem::path& path, int label_column) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError("cannot open dataset file: " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw LoadError(path.string() + ": empty file (header row required)");
    }
    const auto header = split_csv_line(line);
    const int ncols = static_cast<int>(header.size());
    if (ncols < 2) {
        throw LoadError(path.string() + ": need at least one feature column and a label column");
    }
    const int label_idx = label_column < 0 ? ncols - 1 : label_column;
    if (label_idx >= ncols) {
        throw LoadError(path.string() + ": label column " + std::to_string(label_idx) +
                        " out of range (" + std::to_string(ncols) + " columns)");
    }

    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    int row = 1;  // 1-based data row number for messages
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != ncols) {
            throw LoadError(path.string() + ": row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(ncols));
        }
        std::vector<double> feat;
        feat.reserve(ncols - 1);
        for (int c = 0; c < ncols; ++c) {
            if (c == label_idx) continue;
            if (fields[c].empty() || fields[c] == "?") {
                throw LoadError(path.string() + ": missing value at row " + std::to_string(row) +
                                ", column " + header[c]);
            }
            double v;
            if (!parse_double(fields[c], v)) {
                throw LoadError(path.string() + ": non-numeric feature '" + fields[c] +
                                "' at row " + std::to_string(row) + ", column " + header[c]);
            }
            feat.push_back(v);
        }
        if (fields[label_idx].empty()) {
            throw LoadError(path.string() + ": missing label at row " + std::to_string(row));
        }
        features.push_back(std::move(feat));
        labels.push_back(fields[label_idx]);
        ++row;
    }

    const auto n = static_cast<Eigen::Index>(features.size());
    if (n < 2) {
        throw LoadError(path.string() + ": need at least two samples");
    }

    // Map the two distinct label values onto {-1, +1}: numerically smaller
    // (or lexicographically smaller for strings) becomes -1.
    std::vector<std::string> distinct;
    for (const auto& l : labels) {
        if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) {
            distinct.push_back(l);
        }
    }
    if (distinct.size() > 2) {
        throw LoadError(path.string() + ": found " + std::to_string(distinct.size()) +
                        " distinct label values, expected 2");
    }
    if (distinct.size() < 2) {
        throw LoadError(path.string() + ": only one label value present, need both classes");
    }
    double a, b;
    bool numeric = parse_double(distinct[0], a) && parse_double(distinct[1], b);
    std::string neg_label;
    if (numeric) {
        neg_label = a < b ? distinct[0] : distinct[1];
    } else {
        neg_label = distinct[0] < distinct[1] ? distinct[0] : distinct[1];
    }

    Dataset ds;
    ds.name = path.stem().string();
    ds.X.resize(n, static_cast<Eigen::Index>(ncols - 1));
    ds.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
            ds.X(i, j) = features[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        ds.y(i) = labels[static_cast<std::size_t>(i)] == neg_label ? -1 : 1;
    }
    return ds;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
    if (X.rows() == 0) {
        throw InvalidInputError("Standardizer: empty training matrix");
    }
    Standardizer s;
    s.mean = X.colwise().mean();
    s.scale.resize(X.cols());
    const double n = static_cast<double>(X.rows());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double var = (X.col(j).array() - s.mean(j)).square().sum() / n;
        s.scale(j) = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
    if (X.cols() != mean.size()) {
        throw InvalidInputError("Standardizer: dimension mismatch");
    }
    Eigen::MatrixXd out(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        if (scale(j) > 0.0) {
            out.col(j) = (X.col(j).array() - mean(j)) / scale(j);
        } else {
            out.col(j).setZero();
        }
    }
    return out;
}

StandardizeResult standardize(const Dataset& train, const std::vector<Dataset>& others) {
    StandardizeResult result;
    result.stats = Standardizer::fit(train.X);
    result.train = train;
    result.train.X = result.stats.apply(train.X);
    result.others.reserve(others.size());
    for (const auto& d : others) {
        Dataset out = d;
        out.X = result.stats.apply(d.X);
        result.others.push_back(std::move(out));
    }
    return result;
}

FoldPlan stratified_kfold(const Eigen::VectorXi& y, int k, std::uint64_t seed) {
    if (k < 2) throw InvalidInputError("stratified_kfold: need k >= 2");
    const Eigen::Index n = y.size();

    std::map<int, std::vector<Eigen::Index>> by_class;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y(i) != 1 && y(i) != -1) {
            throw InvalidInputError("stratified_kfold: labels must be -1 or +1");
        }
        by_class[y(i)].push_back(i);
    }
    for (const auto& [label, members] : by_class) {
        if (static_cast<int>(members.size()) < k) {
            throw InvalidInputError("stratified_kfold: class " + std::to_string(label) +
                                    " has " + std::to_string(members.size()) +
                                    " members, fewer than k=" + std::to_string(k));
        }
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(static_cast<std::size_t>(n), 0);
    for (auto& [label, members] : by_class) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label + 2)));
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            plan.assignments[static_cast<std::size_t>(members[i])] =
                static_cast<int>(i % static_cast<std::size_t>(k));
        }
    }
    return plan;
}

NoiseResult inject_label_noise(const Eigen::VectorXi& y, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw InvalidInputError("inject_label_noise: fraction must be in [0, 1)");
    }
    const Eigen::Index n = y.size();
    const auto m = static_cast<Eigen::Index>(
        std::floor(fraction * static_cast<double>(n) + 0.5));

    NoiseResult result;
    result.y = y;
    if (m == 0) return result;

    std::vector<Eigen::Index> indices(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) indices[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    // partial Fisher-Yates: the first m entries are a uniform sample
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto j = i + static_cast<Eigen::Index>(
                               rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    result.flipped.assign(indices.begin(), indices.begin() + m);
    std::sort(result.flipped.begin(), result.flipped.end());
    for (Eigen::Index i : result.flipped) {
        result.y(i) = -result.y(i);
    }
    return result;
}

}  // namespace cirkm
