#pragma once

#include "cirkm/data.hpp"
#include "cirkm/model.hpp"

#include <filesystem>
#include <optional>

namespace cirkm {

// A serialized model plus the feature standardization fitted at training
// time, when the training pipeline standardized its inputs.
struct ModelFile {
    TrainedModel model;
    std::optional<Standardizer> standardizer;
};

// Versioned flat file: a plain-text key=value header that documents the
// binary layout, followed by little-endian float64 arrays. Round-trips are
// bit-exact.
void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace cirkm
