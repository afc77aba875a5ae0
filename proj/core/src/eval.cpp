#include "cirkm/eval.hpp"

#include "cirkm/errors.hpp"
#include "cirkm/rng.hpp"
#include "cirkm/solver.hpp"
#include "cirkm/weights.hpp"

#include <json.hpp>

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace cirkm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> log_grid(double base, int lo, int hi) {
    std::vector<double> out;
    for (int e = lo; e <= hi; ++e) out.push_back(std::pow(base, e));
    return out;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
    return out;
}

Eigen::VectorXi take(const Eigen::VectorXi& y, const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXi out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(idx[i]);
    return out;
}

// Run `fn(0..count)` on `jobs` workers. Work items are claimed from an atomic
// counter; each item writes only its own slot, so results are independent of
// the worker count.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const auto workers = static_cast<std::size_t>(jobs) < count
                             ? static_cast<std::size_t>(jobs)
                             : count;
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

nlohmann::json params_to_json(const ModelParams& p) {
    nlohmann::json j;
    j["eta"] = p.eta;
    j["lambda"] = p.lambda;
    j["kernel_family"] = to_string(p.kernel.family);
    j["gamma"] = p.kernel.gamma;
    j["xi"] = p.xi;
    j["weighting"] = to_string(p.weighting);
    j["radius_mode"] = to_string(p.radius_mode);
    return j;
}

nlohmann::json grid_to_json(const GridSpec& grid) {
    nlohmann::json j;
    j["eta"] = grid.eta_grid;
    j["lambda"] = grid.lambda_grid;
    j["gamma"] = grid.gamma_grid;
    j["xi"] = grid.xi_grid;
    return j;
}

nlohmann::json cell_to_json(const CellResult& cell) {
    nlohmann::json j;
    j["dataset"] = cell.dataset;
    j["model"] = cell.model;
    j["ok"] = cell.ok;
    if (!cell.ok) {
        j["error"] = cell.error;
    } else {
        j["best_params"] = params_to_json(cell.cv.best.params);
        j["fold_accuracies"] = cell.cv.best.fold_accuracies;
        j["mean_accuracy"] = cell.cv.best.mean_accuracy;
    }
    return j;
}

nlohmann::json matrix_to_json(const AccuracyMatrix& m) {
    nlohmann::json j;
    j["dataset_names"] = m.dataset_names;
    j["model_names"] = m.model_names;
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.acc.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.acc.cols(); ++c) row.push_back(m.acc(i, c));
        rows.push_back(row);
    }
    j["accuracy"] = rows;
    return j;
}

nlohmann::json benchmark_body(const BenchmarkResult& result) {
    nlohmann::json j;
    j["seed"] = result.seed;
    j["folds"] = result.folds;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : result.cells) cells.push_back(cell_to_json(cell));
    j["cells"] = cells;
    j["matrix"] = matrix_to_json(result.matrix);
    return j;
}

// Prefer higher mean; break ties toward smaller (lambda, gamma, eta, xi).
bool better_config(const ConfigResult& a, const ConfigResult& b) {
    if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
    const auto key = [](const ModelParams& p) {
        return std::array<double, 4>{p.lambda, p.kernel.gamma, p.eta, p.xi};
    };
    return key(a.params) < key(b.params);
}

}  // namespace

GridSpec GridSpec::full_profile() {
    GridSpec g;
    g.eta_grid = log_grid(10.0, -5, 5);
    g.lambda_grid = log_grid(10.0, -5, 5);
    g.gamma_grid = log_grid(2.0, -5, 5);
    return g;
}

GridSpec GridSpec::fast_profile() {
    GridSpec g;
    g.eta_grid = {1.0};
    g.lambda_grid = log_grid(10.0, -5, 5);
    g.gamma_grid = log_grid(2.0, -5, 5);
    return g;
}

GridSpec GridSpec::from_name(const std::string& profile) {
    if (profile == "full") return full_profile();
    if (profile == "fast") return fast_profile();
    throw InvalidInputError("unknown grid profile: " + profile);
}

void GridSpec::validate() const {
    auto check = [](const std::vector<double>& grid, const char* name, bool allow_empty) {
        if (grid.empty() && !allow_empty) {
            throw InvalidInputError(std::string("GridSpec: empty ") + name + " grid");
        }
        for (double v : grid) {
            if (!(v > 0.0)) {
                throw InvalidInputError(std::string("GridSpec: nonpositive value in ") + name +
                                        " grid");
            }
        }
    };
    check(eta_grid, "eta", false);
    check(lambda_grid, "lambda", false);
    check(gamma_grid, "gamma", false);
    check(xi_grid, "xi", true);
}

CvResult grid_search_cv_plan(const Dataset& data, const FoldPlan& plan,
                             const std::vector<Eigen::VectorXi>& y_fit_per_fold,
                             const GridSpec& grid, Weighting weighting,
                             RadiusMode radius_mode, double default_xi) {
    grid.validate();
    if (static_cast<int>(y_fit_per_fold.size()) != plan.k) {
        throw InvalidInputError("grid_search_cv_plan: fit-label vectors do not match fold count");
    }

    const std::vector<double> xis = grid.xi_grid.empty() ? std::vector<double>{default_xi}
                                                         : grid.xi_grid;
    const std::size_t n_gamma = grid.gamma_grid.size();
    const std::size_t n_xi = xis.size();
    const std::size_t n_eta = grid.eta_grid.size();
    const std::size_t n_lambda = grid.lambda_grid.size();
    const std::size_t n_configs = n_gamma * n_xi * n_eta * n_lambda;

    CvResult result;
    result.per_config.resize(n_configs);
    for (std::size_t g = 0; g < n_gamma; ++g) {
        for (std::size_t x = 0; x < n_xi; ++x) {
            for (std::size_t e = 0; e < n_eta; ++e) {
                for (std::size_t l = 0; l < n_lambda; ++l) {
                    const std::size_t idx = ((g * n_xi + x) * n_eta + e) * n_lambda + l;
                    ModelParams& p = result.per_config[idx].params;
                    p.kernel = KernelSpec::rbf(grid.gamma_grid[g]);
                    p.xi = xis[x];
                    p.eta = grid.eta_grid[e];
                    p.lambda = grid.lambda_grid[l];
                    p.weighting = weighting;
                    p.radius_mode = radius_mode;
                    result.per_config[idx].fold_accuracies.assign(
                        static_cast<std::size_t>(plan.k), kNaN);
                }
            }
        }
    }

    for (int f = 0; f < plan.k; ++f) {
        const auto train_idx = plan.train_indices(f);
        const auto test_idx = plan.test_indices(f);
        const Eigen::MatrixXd X_tr_raw = take_rows(data.X, train_idx);
        const Eigen::MatrixXd X_te_raw = take_rows(data.X, test_idx);
        const Eigen::VectorXi y_tr = take(y_fit_per_fold[static_cast<std::size_t>(f)], train_idx);
        const Eigen::VectorXi y_te = take(data.y, test_idx);

        const Standardizer stats = Standardizer::fit(X_tr_raw);
        const Eigen::MatrixXd X_tr = stats.apply(X_tr_raw);
        const Eigen::MatrixXd X_te = stats.apply(X_te_raw);

        // One set of inner products per fold serves the whole gamma grid.
        const Eigen::MatrixXd inner_tr = inner_products(X_tr);
        const Eigen::VectorXd tr_norms = inner_tr.diagonal();
        const Eigen::MatrixXd cross_inner = X_tr * X_te.transpose();
        Eigen::VectorXd te_norms(X_te.rows());
        for (Eigen::Index q = 0; q < X_te.rows(); ++q) te_norms(q) = X_te.row(q).squaredNorm();

        for (std::size_t g = 0; g < n_gamma; ++g) {
            const KernelSpec spec = KernelSpec::rbf(grid.gamma_grid[g]);
            const GramMatrix gram = gram_from_inner(spec, inner_tr);
            const Eigen::MatrixXd cross = cross_gram_from_inner(spec, tr_norms, te_norms, cross_inner);

            for (std::size_t x = 0; x < n_xi; ++x) {
                WeightVector weights;
                if (weighting == Weighting::class_informed) {
                    weights = compute_weights(gram, y_tr, xis[x], radius_mode);
                } else {
                    weights.weights = Eigen::VectorXd::Ones(X_tr.rows());
                    weights.xi = xis[x];
                    weights.radius_mode = radius_mode;
                }

                for (std::size_t e = 0; e < n_eta; ++e) {
                    for (std::size_t l = 0; l < n_lambda; ++l) {
                        const std::size_t idx = ((g * n_xi + x) * n_eta + e) * n_lambda + l;
                        ConfigResult& cfg = result.per_config[idx];
                        try {
                            const BorderedSystem sys = assemble(gram, weights, y_tr,
                                                                grid.eta_grid[e],
                                                                grid.lambda_grid[l]);
                            const DualSolution sol = solve(sys);
                            const Eigen::VectorXd decision =
                                (cross.transpose() * sol.alpha) / grid.eta_grid[e] +
                                Eigen::VectorXd::Constant(X_te.rows(), sol.bias);
                            Eigen::VectorXi pred(decision.size());
                            for (Eigen::Index q = 0; q < decision.size(); ++q) {
                                pred(q) = decision(q) >= 0.0 ? 1 : -1;
                            }
                            cfg.fold_accuracies[static_cast<std::size_t>(f)] =
                                accuracy(y_te, pred);
                        } catch (const SingularSystemError&) {
                            // leave NaN; config is rejected below
                        }
                    }
                }
            }
        }
    }

    bool any_valid = false;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < n_configs; ++i) {
        ConfigResult& cfg = result.per_config[i];
        double sum = 0.0;
        bool valid = true;
        for (double a : cfg.fold_accuracies) {
            if (std::isnan(a)) {
                valid = false;
                break;
            }
            sum += a;
        }
        cfg.mean_accuracy = valid ? sum / static_cast<double>(plan.k) : kNegInf;
        if (valid && (!any_valid || better_config(cfg, result.per_config[best_idx]))) {
            best_idx = i;
            any_valid = true;
        }
    }
    if (!any_valid) {
        throw EvalError("grid search: every configuration was singular on dataset " + data.name);
    }
    result.best = result.per_config[best_idx];
    return result;
}

CvResult grid_search_cv(const Dataset& data, const GridSpec& grid, Weighting weighting, int k,
                        std::uint64_t seed, RadiusMode radius_mode, double default_xi) {
    const FoldPlan plan = stratified_kfold(data.y, k, seed);
    const std::vector<Eigen::VectorXi> y_fit(static_cast<std::size_t>(k), data.y);
    return grid_search_cv_plan(data, plan, y_fit, grid, weighting, radius_mode, default_xi);
}

namespace {

BenchmarkResult run_cells(const std::vector<Dataset>& datasets, const GridSpec& grid,
                          const std::vector<Weighting>& models, int k, std::uint64_t seed,
                          int jobs, RadiusMode radius_mode, double default_xi,
                          double noise_fraction, std::size_t level_index) {
    if (datasets.empty()) throw InvalidInputError("run_benchmark: no datasets");
    if (models.empty()) throw InvalidInputError("run_benchmark: no models");
    grid.validate();

    BenchmarkResult result;
    result.folds = k;
    result.seed = seed;
    result.matrix.acc.resize(static_cast<Eigen::Index>(datasets.size()),
                             static_cast<Eigen::Index>(models.size()));
    result.matrix.acc.setConstant(kNaN);
    for (const auto& d : datasets) result.matrix.dataset_names.push_back(d.name);
    for (const auto m : models) result.matrix.model_names.push_back(model_name(m));
    result.cells.resize(datasets.size() * models.size());

    // Fold plans and training-label noise are per dataset (and per level/fold
    // for noise), shared by every model so the comparison sees the same data.
    // A dataset whose plan cannot be built fails both of its cells.
    std::vector<FoldPlan> plans(datasets.size());
    std::vector<std::vector<Eigen::VectorXi>> y_fit(datasets.size());
    std::vector<std::string> plan_errors(datasets.size());
    for (std::size_t di = 0; di < datasets.size(); ++di) {
        const Dataset& ds = datasets[di];
        try {
            plans[di] = stratified_kfold(ds.y, k, derive_seed(seed, "folds:" + ds.name));
            auto& labels = y_fit[di];
            labels.assign(static_cast<std::size_t>(k), ds.y);
            if (noise_fraction > 0.0) {
                for (int f = 0; f < k; ++f) {
                    const auto train_idx = plans[di].train_indices(f);
                    const Eigen::VectorXi sub = take(ds.y, train_idx);
                    const NoiseResult noisy = inject_label_noise(
                        sub, noise_fraction,
                        derive_seed(derive_seed(seed, "noise:" + ds.name), level_index,
                                    static_cast<std::uint64_t>(f)));
                    for (Eigen::Index pos = 0; pos < noisy.y.size(); ++pos) {
                        labels[static_cast<std::size_t>(f)](
                            train_idx[static_cast<std::size_t>(pos)]) = noisy.y(pos);
                    }
                }
            }
        } catch (const Error& e) {
            plan_errors[di] = e.what();
        }
    }

    const std::size_t n_cells = datasets.size() * models.size();
    parallel_for(n_cells, jobs, [&](std::size_t cell) {
        const std::size_t di = cell / models.size();
        const std::size_t mi = cell % models.size();
        CellResult& out = result.cells[cell];
        out.dataset = datasets[di].name;
        out.model = model_name(models[mi]);
        if (!plan_errors[di].empty()) {
            out.ok = false;
            out.error = plan_errors[di];
            return;
        }
        try {
            out.cv = grid_search_cv_plan(datasets[di], plans[di], y_fit[di], grid, models[mi],
                                         radius_mode, default_xi);
            out.ok = true;
            result.matrix.acc(static_cast<Eigen::Index>(di), static_cast<Eigen::Index>(mi)) =
                out.cv.best.mean_accuracy;
        } catch (const Error& e) {
            out.ok = false;
            out.error = e.what();
        }
    });

    std::string failures;
    for (const auto& cell : result.cells) {
        if (!cell.ok) {
            failures += "\n  (" + cell.dataset + ", " + cell.model + "): " + cell.error;
        }
    }
    if (!failures.empty()) {
        throw EvalError("benchmark cells failed:" + failures);
    }
    return result;
}

}  // namespace

BenchmarkResult run_benchmark(const std::vector<Dataset>& datasets, const GridSpec& grid,
                              const std::vector<Weighting>& models, int k, std::uint64_t seed,
                              int jobs, RadiusMode radius_mode, double default_xi) {
    return run_cells(datasets, grid, models, k, seed, jobs, radius_mode, default_xi, 0.0, 0);
}

std::vector<double> AblationResult::level_averages(std::size_t level_index) const {
    return per_level.at(level_index).matrix.column_means();
}

AblationResult run_ablation(const std::vector<Dataset>& datasets,
                            const std::vector<double>& noise_levels, const GridSpec& grid,
                            const std::vector<Weighting>& models, int k, std::uint64_t seed,
                            int jobs, RadiusMode radius_mode, double default_xi) {
    if (noise_levels.empty()) throw InvalidInputError("run_ablation: no noise levels");
    AblationResult result;
    result.noise_levels = noise_levels;
    for (std::size_t li = 0; li < noise_levels.size(); ++li) {
        result.per_level.push_back(run_cells(datasets, grid, models, k, seed, jobs, radius_mode,
                                             default_xi, noise_levels[li], li));
    }
    return result;
}

std::string benchmark_to_json(const BenchmarkResult& result, const GridSpec& grid,
                              const std::string& timestamp) {
    nlohmann::json j = benchmark_body(result);
    j["schema"] = "cirkm-bench-v1";
    j["grid"] = grid_to_json(grid);
    j["timestamp"] = timestamp;
    return j.dump(2);
}

std::string ablation_to_json(const AblationResult& result, const GridSpec& grid,
                             const std::string& timestamp) {
    nlohmann::json j;
    j["schema"] = "cirkm-ablation-v1";
    j["grid"] = grid_to_json(grid);
    j["timestamp"] = timestamp;
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t li = 0; li < result.noise_levels.size(); ++li) {
        nlohmann::json level = benchmark_body(result.per_level[li]);
        level["noise_fraction"] = result.noise_levels[li];
        level["average_accuracy"] = result.level_averages(li);
        levels.push_back(level);
    }
    j["levels"] = levels;
    return j.dump(2);
}

std::string cv_result_to_json(const CvResult& result) {
    nlohmann::json j;
    j["schema"] = "cirkm-cv-v1";
    j["best"] = {{"params", params_to_json(result.best.params)},
                 {"fold_accuracies", result.best.fold_accuracies},
                 {"mean_accuracy", result.best.mean_accuracy}};
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& cfg : result.per_config) {
        configs.push_back({{"params", params_to_json(cfg.params)},
                           {"fold_accuracies", cfg.fold_accuracies},
                           {"mean_accuracy", cfg.mean_accuracy}});
    }
    j["per_config"] = configs;
    return j.dump(2);
}

}  // namespace cirkm
