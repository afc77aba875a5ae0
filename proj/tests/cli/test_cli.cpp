// End-to-end tests that drive the built `cirkm` binary.

#include "cirkm/stats.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

#ifndef CIRKM_CLI_PATH
#error "CIRKM_CLI_PATH must be defined by the build"
#endif
#ifndef CIRKM_FIXTURES_DIR
#error "CIRKM_FIXTURES_DIR must be defined by the build"
#endif

namespace {

const std::string kCli = CIRKM_CLI_PATH;
const fs::path kFixtures = CIRKM_FIXTURES_DIR;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("cirkm_cli_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunResult run(const std::string& args, const fs::path& workdir) {
    const fs::path out = workdir / "stdout.txt";
    const fs::path err = workdir / "stderr.txt";
    const std::string cmd = "cd " + workdir.string() + " && " + kCli + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.stdout_text = slurp(out);
    r.stderr_text = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("train writes a model file and a manifest") {
    TempDir tmp("train");
    const auto r = run("train --data " + (kFixtures / "blobs_easy.csv").string() +
                           " --eta 1 --lambda 0.01 --gamma 1 --out out",
                       tmp.path);
    CAPTURE(r.stderr_text);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(tmp.path / "out" / "model.cirkm"));
    CHECK(fs::exists(tmp.path / "out" / "manifest.ini"));
}

TEST_CASE("train without explicit params runs a grid search") {
    TempDir tmp("gridtrain");
    const auto r = run("train --data " + (kFixtures / "blobs_easy.csv").string() +
                           " --grid-profile fast --folds 5 --seed 3 --out out",
                       tmp.path);
    CAPTURE(r.stderr_text);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(tmp.path / "out" / "model.cirkm"));
    CHECK(fs::exists(tmp.path / "out" / "cv_report.json"));
    const auto j = nlohmann::json::parse(slurp(tmp.path / "out" / "cv_report.json"));
    CHECK(j.at("per_config").size() == 121);  // fast profile: 11 lambda x 11 gamma
    CHECK(j.at("best").at("mean_accuracy").get<double>() == 100.0);
}

TEST_CASE("train on a missing file exits 2 and names the path") {
    TempDir tmp("missing");
    const auto r = run("train --data /no/such/file.csv --eta 1 --lambda 1 --gamma 1", tmp.path);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("weighting choice is irrelevant when both classes are singletons") {
    TempDir tmp("tiny");
    const auto data = (kFixtures / "tiny2.csv").string();
    for (const std::string w : {"uniform", "class_informed"}) {
        const auto r = run("train --data " + data +
                               " --eta 1 --lambda 1 --gamma 1 --weighting " + w + " --out " + w,
                           tmp.path);
        CAPTURE(r.stderr_text);
        REQUIRE(r.exit_code == 0);
        const auto p =
            run("predict --model " + w + "/model.cirkm --data " + data + " --out " + w + "_pred",
                tmp.path);
        REQUIRE(p.exit_code == 0);
    }
    CHECK(slurp(tmp.path / "uniform_pred" / "predictions.csv") ==
          slurp(tmp.path / "class_informed_pred" / "predictions.csv"));
}

TEST_CASE("train then predict on the training data recovers every label") {
    TempDir tmp("roundtrip");
    const auto data = (kFixtures / "blobs_easy.csv").string();
    const auto t = run("train --data " + data + " --eta 1 --lambda 0.001 --gamma 1 --out m",
                       tmp.path);
    REQUIRE(t.exit_code == 0);
    const auto p = run("predict --model m/model.cirkm --data " + data + " --out p", tmp.path);
    REQUIRE(p.exit_code == 0);

    // compare predicted labels with the CSV labels (0 -> -1, 1 -> +1)
    std::ifstream ds(kFixtures / "blobs_easy.csv");
    std::string line;
    std::getline(ds, line);  // header
    std::vector<int> truth;
    while (std::getline(ds, line)) {
        if (line.empty()) continue;
        truth.push_back(line.back() == '1' ? 1 : -1);
    }

    std::ifstream pred(tmp.path / "p" / "predictions.csv");
    std::getline(pred, line);  // header
    std::size_t idx = 0, matches = 0;
    while (std::getline(pred, line)) {
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        REQUIRE(idx < truth.size());
        if (std::stoi(line.substr(comma + 1)) == truth[idx]) ++matches;
        ++idx;
    }
    CHECK(idx == truth.size());
    CHECK(matches == truth.size());
}

TEST_CASE("predict rejects a corrupted model file with exit 2") {
    TempDir tmp("corrupt");
    std::ofstream bad(tmp.path / "bad.cirkm", std::ios::binary);
    bad << "not a model";
    bad.close();
    const auto r = run("predict --model bad.cirkm --data " +
                           (kFixtures / "blobs_easy.csv").string() + " --out p",
                       tmp.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("predict on an empty query writes an empty predictions file") {
    TempDir tmp("empty");
    const auto t = run("train --data " + (kFixtures / "blobs_easy.csv").string() +
                           " --eta 1 --lambda 1 --gamma 1 --out m",
                       tmp.path);
    REQUIRE(t.exit_code == 0);
    std::ofstream q(tmp.path / "query.csv");
    q << "f1,f2\n";
    q.close();
    const auto p = run("predict --model m/model.cirkm --data query.csv --out p", tmp.path);
    CHECK(p.exit_code == 0);
    CHECK(slurp(tmp.path / "p" / "predictions.csv") == "index,decision_value,label\n");
}

TEST_CASE("predict rejects dimension mismatch with exit 2") {
    TempDir tmp("dim");
    const auto t = run("train --data " + (kFixtures / "blobs_easy.csv").string() +
                           " --eta 1 --lambda 1 --gamma 1 --out m",
                       tmp.path);
    REQUIRE(t.exit_code == 0);
    std::ofstream q(tmp.path / "query.csv");
    q << "a,b,c,d\n1,2,3,4\n";
    q.close();
    const auto p = run("predict --model m/model.cirkm --data query.csv --out p", tmp.path);
    CHECK(p.exit_code == 2);
}

TEST_CASE("stats reproduces the reference report from the committed table") {
    TempDir tmp("stats");
    const auto r = run("stats --data " + (kFixtures / "uci_26x6_accuracy.csv").string() +
                           " --out s",
                       tmp.path);
    CAPTURE(r.stderr_text);
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("Average ranks") != std::string::npos);

    const auto j = nlohmann::json::parse(slurp(tmp.path / "s" / "stats.json"));
    CHECK(j.at("cd").get<double>() == doctest::Approx(1.4788).epsilon(1e-4));
    CHECK(j.at("dof")[0].get<int>() == 5);
    CHECK(j.at("dof")[1].get<int>() == 125);
    const auto ranks = j.at("avg_ranks").get<std::vector<double>>();
    CHECK(ranks.size() == 6);
    // CI-RKM column: significant vs the first three baselines, not vs NF/RKM
    const auto pw = j.at("pairwise_significant");
    CHECK(pw[1][5].get<int>() == 1);
    CHECK(pw[2][5].get<int>() == 1);
    CHECK(pw[3][5].get<int>() == 1);
    CHECK(pw[4][5].get<int>() == 0);
    CHECK(pw[0][5].get<int>() == 0);
}

TEST_CASE("stats rejects an unsupported alpha with exit 2") {
    TempDir tmp("alpha");
    const auto r = run("stats --data " + (kFixtures / "uci_26x6_accuracy.csv").string() +
                           " --alpha 0.01 --out s",
                       tmp.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("bench is reproducible and ablate at noise 0 matches bench") {
    TempDir tmp("bench");
    fs::create_directories(tmp.path / "data");
    for (const char* name : {"blobs_easy.csv", "rings.csv"}) {
        fs::copy_file(kFixtures / name, tmp.path / "data" / name);
    }
    // a deliberately small grid via config file to keep this test quick
    const std::string flags = " --data data --seed 7 --folds 3 --jobs 2 --grid-profile fast";

    const auto b1 = run("bench" + flags + " --out b1", tmp.path);
    CAPTURE(b1.stderr_text);
    REQUIRE(b1.exit_code == 0);
    const auto b2 = run("bench" + flags + " --out b2", tmp.path);
    REQUIRE(b2.exit_code == 0);

    CHECK(slurp(tmp.path / "b1" / "accuracy_matrix.csv") ==
          slurp(tmp.path / "b2" / "accuracy_matrix.csv"));

    // results.json byte-identical apart from the timestamp
    auto j1 = nlohmann::json::parse(slurp(tmp.path / "b1" / "results.json"));
    auto j2 = nlohmann::json::parse(slurp(tmp.path / "b2" / "results.json"));
    j1.erase("timestamp");
    j2.erase("timestamp");
    CHECK(j1.dump() == j2.dump());

    const auto a = run("ablate" + flags + " --noise-levels 0 --out a0", tmp.path);
    CAPTURE(a.stderr_text);
    REQUIRE(a.exit_code == 0);
    const auto bench_matrix = cirkm::load_accuracy_csv(tmp.path / "b1" / "accuracy_matrix.csv");
    const auto ablate_matrix =
        cirkm::load_accuracy_csv(tmp.path / "a0" / "accuracy_matrix_noise_0.csv");
    CHECK((bench_matrix.acc - ablate_matrix.acc).cwiseAbs().maxCoeff() == 0.0);

    // the separable fixture reaches 100 for both models
    CHECK(bench_matrix.acc(0, 0) == 100.0);
    CHECK(bench_matrix.acc(0, 1) == 100.0);
}

TEST_CASE("a run can be reproduced from its manifest") {
    TempDir tmp("manifest");
    const auto data = (kFixtures / "blobs_easy.csv").string();
    const auto r1 = run("train --data " + data + " --eta 2 --lambda 0.5 --gamma 0.25 --out m1",
                        tmp.path);
    REQUIRE(r1.exit_code == 0);
    const auto r2 = run("train --config m1/manifest.ini --out m2", tmp.path);
    CAPTURE(r2.stderr_text);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(tmp.path / "m1" / "model.cirkm") == slurp(tmp.path / "m2" / "model.cirkm"));
}
