#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saturn/policy/model.hpp"
#include "saturn/rl/trainer.hpp"

namespace saturn::harness {

/// Everything a run needs besides its corpus.
struct RunConfig {
  vec::VectorizerConfig vec;
  policy::PolicyConfig policy;
  rl::TrainConfig train;
};

/// Lists every problem found in a configuration, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  [[nodiscard]] const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Keys accepted in a configuration document, in documentation order.
std::vector<std::string> config_keys();

/// Applies a flat JSON object of `key: value` pairs on top of the defaults.
/// Unknown keys, wrong types and invalid values are all reported together.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Every key with its current value; parse_config of the result is the identity.
nlohmann::json config_to_json(const RunConfig& c);

/// Validation messages of all three parts.
std::vector<std::string> validate(const RunConfig& c);

}  // namespace saturn::harness
