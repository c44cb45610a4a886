#include "saturn/nn/adam.hpp"

#include <cmath>

#include "saturn/nn/tensor.hpp"

namespace saturn::nn {

void Adam::step(ParamStore& params) {
  for (const auto& [name, p] : params.entries())
    if (!p.grad.allFinite()) throw NumericError("non-finite gradient for " + name);

  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (auto& [name, p] : params.entries()) {
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) p.zero_grad();
    auto [it, fresh] = moments_.try_emplace(name);
    Moments& mo = it->second;
    if (fresh || mo.m.rows() != p.value.rows() || mo.m.cols() != p.value.cols()) {
      mo.m = Matrix::Zero(p.value.rows(), p.value.cols());
      mo.v = Matrix::Zero(p.value.rows(), p.value.cols());
    }
    mo.m = config_.beta1 * mo.m + (1.0 - config_.beta1) * p.grad;
    mo.v = config_.beta2 * mo.v + (1.0 - config_.beta2) * p.grad.cwiseAbs2();
    p.value.array() -=
        config_.lr * (mo.m.array() / c1) / ((mo.v.array() / c2).sqrt() + config_.eps);
  }
}

}  // namespace saturn::nn
