#include "saturn/nn/params.hpp"

#include <cmath>

namespace saturn::nn {

Parameter& ParamStore::add(const std::string& name, Matrix init) {
  if (params_.contains(name)) throw std::invalid_argument("duplicate parameter: " + name);
  Parameter p{name, std::move(init), {}};
  p.zero_grad();
  return params_.emplace(name, std::move(p)).first->second;
}

Parameter& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

const Parameter& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

void ParamStore::zero_grad() {
  for (auto& [_, p] : params_) p.zero_grad();
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [_, p] : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

Matrix init_fan_in(Index rows, Index cols, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(cols, 1)));
  Matrix m(rows, cols);
  // row-major draw order so the result does not depend on storage order
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, -bound, bound);
  return m;
}

}  // namespace saturn::nn
