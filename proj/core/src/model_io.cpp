#include "cirkm/model_io.hpp"

#include "cirkm/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; writer for big-endian hosts not implemented");

namespace cirkm {

namespace {

constexpr const char* kMagic = "cirkm-model v1";

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t count,
                  const std::string& what) {
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
        throw LoadError("model file truncated while reading " + what);
    }
}

}  // namespace

void save_model(const ModelFile& file, const std::filesystem::path& path) {
    const TrainedModel& m = file.model;
    const Eigen::Index n = m.X_train.rows();
    const Eigen::Index d = m.X_train.cols();
    if (m.alpha.size() != n || m.train_weights.weights.size() != n) {
        throw InvalidInputError("save_model: inconsistent model (alpha/weights vs X_train)");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open model file for writing: " + path.string());

    out << kMagic << "\n";
    out << "kernel_family=" << to_string(m.params.kernel.family) << "\n";
    out << "kernel_degree=" << m.params.kernel.degree << "\n";
    out << "weighting=" << to_string(m.params.weighting) << "\n";
    out << "radius_mode=" << to_string(m.train_weights.radius_mode) << "\n";
    out << "n=" << n << "\n";
    out << "d=" << d << "\n";
    out << "standardizer=" << (file.standardizer ? 1 : 0) << "\n";
    out << "layout=le_f64:gamma,coef0,eta,lambda,xi,bias,alpha[n],weights[n],"
           "X_train[n*d]_row_major";
    if (file.standardizer) out << ",mean[d],scale[d]";
    out << "\n";
    out << "binary\n";

    const double scalars[6] = {m.params.kernel.gamma, m.params.kernel.coef0, m.params.eta,
                               m.params.lambda,       m.params.xi,           m.bias};
    write_doubles(out, scalars, 6);
    write_doubles(out, m.alpha.data(), static_cast<std::size_t>(n));
    write_doubles(out, m.train_weights.weights.data(), static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd row = m.X_train.row(i).transpose();
        write_doubles(out, row.data(), static_cast<std::size_t>(d));
    }
    if (file.standardizer) {
        if (file.standardizer->mean.size() != d || file.standardizer->scale.size() != d) {
            throw InvalidInputError("save_model: standardizer dimension mismatch");
        }
        write_doubles(out, file.standardizer->mean.data(), static_cast<std::size_t>(d));
        write_doubles(out, file.standardizer->scale.data(), static_cast<std::size_t>(d));
    }
    if (!out) throw LoadError("write error on model file: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open model file: " + path.string());

    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw LoadError(path.string() + ": not a cirkm model file (bad magic)");
    }

    std::map<std::string, std::string> header;
    while (std::getline(in, line)) {
        if (line == "binary") break;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw LoadError(path.string() + ": malformed model header line: " + line);
        }
        header[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (line != "binary") {
        throw LoadError(path.string() + ": model header missing binary marker");
    }

    auto require = [&](const char* key) -> const std::string& {
        auto it = header.find(key);
        if (it == header.end()) {
            throw LoadError(path.string() + ": model header missing key " + key);
        }
        return it->second;
    };

    ModelFile file;
    TrainedModel& m = file.model;
    Eigen::Index n = 0, d = 0;
    bool has_std = false;
    try {
        m.params.kernel.family = kernel_family_from_string(require("kernel_family"));
        m.params.kernel.degree = std::stoi(require("kernel_degree"));
        m.params.weighting = weighting_from_string(require("weighting"));
        m.params.radius_mode = radius_mode_from_string(require("radius_mode"));
        n = std::stoll(require("n"));
        d = std::stoll(require("d"));
        has_std = require("standardizer") == "1";
    } catch (const InvalidInputError& e) {
        throw LoadError(path.string() + ": " + e.what());
    } catch (const std::exception& e) {
        throw LoadError(path.string() + ": malformed model header (" + e.what() + ")");
    }
    if (n < 0 || d < 0 || n > (1 << 26) || d > (1 << 26)) {
        throw LoadError(path.string() + ": implausible model dimensions");
    }

    double scalars[6];
    read_doubles(in, scalars, 6, "scalar block");
    m.params.kernel.gamma = scalars[0];
    m.params.kernel.coef0 = scalars[1];
    m.params.eta = scalars[2];
    m.params.lambda = scalars[3];
    m.params.xi = scalars[4];
    m.bias = scalars[5];

    m.alpha.resize(n);
    read_doubles(in, m.alpha.data(), static_cast<std::size_t>(n), "alpha");
    m.train_weights.weights.resize(n);
    m.train_weights.xi = m.params.xi;
    m.train_weights.radius_mode = m.params.radius_mode;
    read_doubles(in, m.train_weights.weights.data(), static_cast<std::size_t>(n), "weights");

    m.X_train.resize(n, d);
    std::vector<double> row(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < n; ++i) {
        read_doubles(in, row.data(), static_cast<std::size_t>(d), "X_train");
        for (Eigen::Index j = 0; j < d; ++j) m.X_train(i, j) = row[static_cast<std::size_t>(j)];
    }

    if (has_std) {
        Standardizer s;
        s.mean.resize(d);
        s.scale.resize(d);
        read_doubles(in, s.mean.data(), static_cast<std::size_t>(d), "standardizer mean");
        read_doubles(in, s.scale.data(), static_cast<std::size_t>(d), "standardizer scale");
        file.standardizer = std::move(s);
    }

    char extra;
    if (in.read(&extra, 1); in.gcount() != 0) {
        throw LoadError(path.string() + ": trailing bytes after model payload");
    }
    return file;
}

}  // namespace cirkm
