// cirkm: command line front end for the RKM / CI-RKM library.
//
// Exit codes: 0 success, 1 internal or numerical failure, 2 user-input error.

#include "cirkm/errors.hpp"
#include "cirkm/eval.hpp"
#include "cirkm/model_io.hpp"
#include "cirkm/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cirkm;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot write " + path.string());
    out << text;
}

// Echo the fully resolved configuration of the invoked subcommand so the run
// can be reproduced with `cirkm <command> --config manifest.ini`.
void write_manifest(const CLI::App* subcommand, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    write_text(out_dir / "manifest.ini",
               "[" + subcommand->get_name() + "]\n" + subcommand->config_to_str(true, false));
}

std::vector<Dataset> load_dataset_inputs(const std::string& data_arg, int label_column) {
    std::vector<Dataset> datasets;
    const fs::path p(data_arg);
    if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.path().extension() == ".csv") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) datasets.push_back(load_csv(f, label_column));
        if (datasets.empty()) {
            throw LoadError("no .csv datasets found in directory " + p.string());
        }
    } else {
        datasets.push_back(load_csv(p, label_column));
    }
    return datasets;
}

std::vector<Weighting> parse_models(const std::string& weighting) {
    if (weighting == "both") return {Weighting::uniform, Weighting::class_informed};
    return {weighting_from_string(weighting)};
}

double format_friendly(double v) { return v; }

// Query CSV for prediction: header plus numeric feature rows. A file with one
// extra column (a training file with labels) is accepted; the label column is
// ignored.
Eigen::MatrixXd load_query_matrix(const fs::path& path, Eigen::Index expected_dim) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open query file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        throw LoadError(path.string() + ": empty file (header row required)");
    }
    auto count_fields = [](const std::string& l) {
        return static_cast<Eigen::Index>(std::count(l.begin(), l.end(), ',')) + 1;
    };
    const Eigen::Index ncols = count_fields(line);
    bool drop_last;
    if (ncols == expected_dim) {
        drop_last = false;
    } else if (ncols == expected_dim + 1) {
        drop_last = true;
    } else {
        throw InvalidInputError(path.string() + ": query has " + std::to_string(ncols) +
                                " columns, model expects " + std::to_string(expected_dim) +
                                " features");
    }

    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string field;
        Eigen::Index col = 0;
        while (std::getline(ss, field, ',')) {
            while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
                field.pop_back();
            }
            if (drop_last && col == ncols - 1) break;
            double v;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || ptr != field.data() + field.size()) {
                throw LoadError(path.string() + ": non-numeric value '" + field + "' at line " +
                                std::to_string(lineno));
            }
            row.push_back(v);
            ++col;
        }
        if (static_cast<Eigen::Index>(row.size()) != expected_dim) {
            throw LoadError(path.string() + ": line " + std::to_string(lineno) +
                            " has wrong field count");
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), expected_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (Eigen::Index j = 0; j < expected_dim; ++j) {
            out(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
        }
    }
    return out;
}

struct CommonOpts {
    std::string data;
    std::string out = "cirkm_out";
    std::string grid_profile = "full";
    std::string weighting = "both";
    std::string radius_mode = "centroid_max";
    double xi = 1e-2;
    std::uint64_t seed = 42;
    int folds = 5;
    int jobs = 1;
    int label_column = -1;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_grid) {
    cmd->configurable();
    cmd->fallthrough();
    cmd->option_defaults()->always_capture_default();
    cmd->add_option("--data", opts.data, "Dataset CSV file or directory of CSVs")->required();
    cmd->add_option("--out", opts.out, "Output directory");
    cmd->add_option("--seed", opts.seed, "Master seed");
    cmd->add_option("--folds", opts.folds, "Cross-validation fold count");
    cmd->add_option("--xi", opts.xi, "Weight offset xi (> 0)");
    cmd->add_option("--radius-mode", opts.radius_mode, "centroid_max or pairwise_max")
        ->check(CLI::IsMember({"centroid_max", "pairwise_max"}));
    cmd->add_option("--label-column", opts.label_column,
                    "0-based label column index (-1 = last)");
    if (with_grid) {
        cmd->add_option("--grid-profile", opts.grid_profile, "Hyperparameter grid profile")
            ->check(CLI::IsMember({"fast", "full"}));
        cmd->add_option("--jobs", opts.jobs, "Worker threads for independent cells")
            ->check(CLI::PositiveNumber);
    }
}

int cmd_train(const CLI::App* cmd, const CommonOpts& opts, double eta, double lambda,
              double gamma, bool explicit_params) {
    const Dataset raw = load_csv(opts.data, opts.label_column);
    const RadiusMode mode = radius_mode_from_string(opts.radius_mode);
    const Weighting weighting = weighting_from_string(
        opts.weighting == "both" ? "class_informed" : opts.weighting);

    const fs::path out_dir(opts.out);
    fs::create_directories(out_dir);

    ModelParams params;
    params.weighting = weighting;
    params.radius_mode = mode;
    params.xi = opts.xi;

    if (explicit_params) {
        params.eta = eta;
        params.lambda = lambda;
        params.kernel = KernelSpec::rbf(gamma);
    } else {
        const GridSpec grid = GridSpec::from_name(opts.grid_profile);
        const auto cv = grid_search_cv(raw, grid, weighting, opts.folds, opts.seed, mode,
                                       opts.xi);
        params = cv.best.params;
        write_text(out_dir / "cv_report.json", cv_result_to_json(cv));
        std::cout << "grid search best: lambda=" << params.lambda
                  << " gamma=" << params.kernel.gamma << " eta=" << params.eta
                  << " mean_accuracy=" << cv.best.mean_accuracy << "\n";
    }

    const StandardizeResult std_result = standardize(raw);
    ModelFile file;
    file.model = fit(std_result.train.X, std_result.train.y, params);
    file.standardizer = std_result.stats;
    save_model(file, out_dir / "model.cirkm");
    write_manifest(cmd, out_dir);
    std::cout << "model written to " << (out_dir / "model.cirkm").string() << "\n";
    return 0;
}

int cmd_predict(const CLI::App* cmd, const std::string& model_path, const std::string& query_path,
                const std::string& out) {
    const ModelFile file = load_model(model_path);
    Eigen::MatrixXd Q = load_query_matrix(query_path, file.model.X_train.cols());
    if (file.standardizer) Q = file.standardizer->apply(Q);

    const Eigen::VectorXd decision = decision_function(file.model, Q);
    const Eigen::VectorXi labels = predict(file.model, Q);

    const fs::path out_dir(out);
    fs::create_directories(out_dir);
    std::ofstream pred(out_dir / "predictions.csv");
    pred << "index,decision_value,label\n";
    for (Eigen::Index i = 0; i < decision.size(); ++i) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), decision(i));
        pred << i << "," << std::string(buf, ptr) << "," << labels(i) << "\n";
    }
    pred.close();
    write_manifest(cmd, out_dir);
    std::cout << decision.size() << " predictions written to "
              << (out_dir / "predictions.csv").string() << "\n";
    return 0;
}

int cmd_bench(const CLI::App* cmd, const CommonOpts& opts) {
    const auto datasets = load_dataset_inputs(opts.data, opts.label_column);
    const auto models = parse_models(opts.weighting);
    const GridSpec grid = GridSpec::from_name(opts.grid_profile);
    const RadiusMode mode = radius_mode_from_string(opts.radius_mode);

    const auto result = run_benchmark(datasets, grid, models, opts.folds, opts.seed, opts.jobs,
                                      mode, opts.xi);

    const fs::path out_dir(opts.out);
    fs::create_directories(out_dir);
    write_text(out_dir / "results.json", benchmark_to_json(result, grid, iso_timestamp()));
    save_accuracy_csv(result.matrix, out_dir / "accuracy_matrix.csv");
    write_manifest(cmd, out_dir);

    for (const auto& cell : result.cells) {
        std::cout << cell.dataset << " x " << cell.model << ": "
                  << format_friendly(cell.cv.best.mean_accuracy) << "\n";
    }
    std::cout << "artifacts written to " << out_dir.string() << "\n";
    return 0;
}

int cmd_ablate(const CLI::App* cmd, const CommonOpts& opts,
               const std::vector<double>& noise_levels) {
    const auto datasets = load_dataset_inputs(opts.data, opts.label_column);
    const auto models = parse_models(opts.weighting);
    const GridSpec grid = GridSpec::from_name(opts.grid_profile);
    const RadiusMode mode = radius_mode_from_string(opts.radius_mode);

    const auto result = run_ablation(datasets, noise_levels, grid, models, opts.folds,
                                     opts.seed, opts.jobs, mode, opts.xi);

    const fs::path out_dir(opts.out);
    fs::create_directories(out_dir);
    write_text(out_dir / "ablation.json", ablation_to_json(result, grid, iso_timestamp()));
    for (std::size_t li = 0; li < noise_levels.size(); ++li) {
        const int pct = static_cast<int>(noise_levels[li] * 100.0 + 0.5);
        save_accuracy_csv(result.per_level[li].matrix,
                          out_dir / ("accuracy_matrix_noise_" + std::to_string(pct) + ".csv"));
        const auto averages = result.level_averages(li);
        std::cout << "noise " << noise_levels[li] << " average accuracy:";
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            std::cout << " " << model_name(models[mi]) << "=" << averages[mi];
        }
        std::cout << "\n";
    }
    write_manifest(cmd, out_dir);
    std::cout << "artifacts written to " << out_dir.string() << "\n";
    return 0;
}

int cmd_stats(const CLI::App* cmd, const std::string& matrix_path, double alpha,
              const std::string& out) {
    const auto matrix = load_accuracy_csv(matrix_path);
    const auto report = make_stats_report(matrix, alpha);

    print_stats_report(std::cout, report);

    const fs::path out_dir(out);
    fs::create_directories(out_dir);
    write_text(out_dir / "stats.json", stats_report_to_json(report));
    write_manifest(cmd, out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restricted kernel machines with class-informed weighting"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value config file (flags override)");

    CommonOpts train_opts, bench_opts, ablate_opts;
    double eta = 1.0, lambda = 1.0, gamma = 1.0;

    auto* train = app.add_subcommand("train", "Fit a model (grid search unless "
                                              "--eta/--lambda/--gamma are all given)");
    train_opts.weighting = "class_informed";
    add_common_flags(train, train_opts, true);
    auto* eta_opt = train->add_option("--eta", eta, "Regularization eta");
    auto* lambda_opt = train->add_option("--lambda", lambda, "Regularization lambda");
    auto* gamma_opt = train->add_option("--gamma", gamma, "RBF kernel parameter");
    train->add_option("--weighting", train_opts.weighting, "uniform or class_informed")
        ->check(CLI::IsMember({"uniform", "class_informed"}));

    std::string model_path, query_path, predict_out = "cirkm_out";
    auto* predict_cmd = app.add_subcommand("predict", "Predict with a saved model");
    predict_cmd->configurable();
    predict_cmd->fallthrough();
    predict_cmd->option_defaults()->always_capture_default();
    predict_cmd->add_option("--model", model_path, "Model file from `train`")->required();
    predict_cmd->add_option("--data", query_path, "Query CSV")->required();
    predict_cmd->add_option("--out", predict_out, "Output directory");

    auto* bench = app.add_subcommand("bench", "Cross-validated benchmark over datasets");
    add_common_flags(bench, bench_opts, true);
    bench->add_option("--weighting", bench_opts.weighting,
                      "uniform, class_informed, or both")
        ->check(CLI::IsMember({"uniform", "class_informed", "both"}));

    std::vector<double> noise_levels{0.05, 0.10, 0.20};
    auto* ablate = app.add_subcommand("ablate", "Label-noise ablation");
    add_common_flags(ablate, ablate_opts, true);
    ablate->add_option("--weighting", ablate_opts.weighting,
                       "uniform, class_informed, or both")
        ->check(CLI::IsMember({"uniform", "class_informed", "both"}));
    ablate->add_option("--noise-levels", noise_levels,
                       "Training-label noise fractions, e.g. 0.05 0.1 0.2")
        ->delimiter(',');

    std::string stats_matrix, stats_out = "cirkm_out";
    double alpha = 0.05;
    auto* stats = app.add_subcommand("stats", "Rank statistics from an accuracy matrix CSV");
    stats->configurable();
    stats->fallthrough();
    stats->option_defaults()->always_capture_default();
    stats->add_option("--data", stats_matrix, "Accuracy matrix CSV (dataset,model...)")
        ->required();
    stats->add_option("--alpha", alpha, "Nemenyi significance level (0.05 or 0.10)");
    stats->add_option("--out", stats_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train->parsed()) {
            const bool explicit_params = eta_opt->count() && lambda_opt->count() &&
                                         gamma_opt->count();
            return cmd_train(train, train_opts, eta, lambda, gamma, explicit_params);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(predict_cmd, model_path, query_path, predict_out);
        }
        if (bench->parsed()) return cmd_bench(bench, bench_opts);
        if (ablate->parsed()) return cmd_ablate(ablate, ablate_opts, noise_levels);
        if (stats->parsed()) return cmd_stats(stats, stats_matrix, alpha, stats_out);
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const LoadError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
