#pragma once

#include <map>
#include <string>
#include <vector>

#include "saturn/nn/tensor.hpp"
#include "saturn/util/random.hpp"

namespace saturn::nn {

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Named parameter tensors. Iteration order is by name, which fixes the
/// order of initialisation draws and of checkpoint entries.
class ParamStore {
 public:
  Parameter& add(const std::string& name, Matrix init);
  [[nodiscard]] bool contains(const std::string& name) const { return params_.contains(name); }
  Parameter& at(const std::string& name);
  [[nodiscard]] const Parameter& at(const std::string& name) const;

  [[nodiscard]] std::map<std::string, Parameter>& entries() noexcept { return params_; }
  [[nodiscard]] const std::map<std::string, Parameter>& entries() const noexcept { return params_; }

  void zero_grad();
  [[nodiscard]] std::size_t scalar_count() const;

 private:
  std::map<std::string, Parameter> params_;
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) with fan_in = cols.
Matrix init_fan_in(Index rows, Index cols, Rng& rng);

}  // namespace saturn::nn
