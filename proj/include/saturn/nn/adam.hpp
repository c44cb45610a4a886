#pragma once

#include <map>
#include <string>

#include "saturn/nn/params.hpp"

namespace saturn::nn {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct Moments {
  Matrix m;
  Matrix v;
};

/// Adam with bias correction. Moments are created lazily, one per
/// parameter name, with the parameter's shape.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  /// Applies one update from the gradients stored in `params`. Throws
  /// NumericError if any gradient is not finite; nothing is modified then.
  void step(ParamStore& params);

  [[nodiscard]] const AdamConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
  [[nodiscard]] const std::map<std::string, Moments>& moments() const noexcept { return moments_; }

  void restore(std::uint64_t steps, std::map<std::string, Moments> moments) {
    steps_ = steps;
    moments_ = std::move(moments);
  }

 private:
  AdamConfig config_;
  std::uint64_t steps_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace saturn::nn
