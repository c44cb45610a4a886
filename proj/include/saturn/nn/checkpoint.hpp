#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "saturn/nn/adam.hpp"
#include "saturn/nn/params.hpp"

namespace saturn::nn {

inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"shape": [r, c], "data": [...]} with row-major data.
nlohmann::json tensor_to_json(const Matrix& m);
Matrix tensor_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const ParamStore& params);
/// Overwrites values of existing parameters and adds missing ones. Shape
/// mismatches with an existing parameter throw CheckpointError.
void params_from_json(const nlohmann::json& j, ParamStore& params);

nlohmann::json adam_to_json(const Adam& adam);
Adam adam_from_json(const nlohmann::json& j);

struct Checkpoint {
  ParamStore params;
  std::optional<Adam> optimizer;
  /// Free-form metadata, e.g. the configuration and training progress.
  nlohmann::json meta = nlohmann::json::object();
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace saturn::nn
