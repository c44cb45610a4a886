#include "saturn/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace saturn::nn {

double relative_error(double fd, double bp) {
  return std::abs(fd - bp) / std::max(1e-8, std::abs(fd) + std::abs(bp));
}

namespace {

double scalar_of(const Var& v) {
  if (v.rows() != 1 || v.cols() != 1) throw ShapeError("grad_check: f must be scalar");
  return v.value()(0, 0);
}

}  // namespace

double grad_check(const std::function<Var(Tape&, const Var&)>& f, const Matrix& x, double eps) {
  Matrix analytic;
  {
    Tape t;
    Var xv = t.variable(x);
    Var y = f(t, xv);
    scalar_of(y);
    t.backward(y);
    analytic = t.grad(xv);
  }
  auto eval = [&](const Matrix& at) {
    Tape t;
    return scalar_of(f(t, t.constant(at)));
  };
  double worst = 0.0;
  Matrix probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double orig = probe(i);
    probe(i) = orig + eps;
    const double up = eval(probe);
    probe(i) = orig - eps;
    const double down = eval(probe);
    probe(i) = orig;
    worst = std::max(worst, relative_error((up - down) / (2.0 * eps), analytic(i)));
  }
  return worst;
}

double grad_check_params(const std::function<Var(Tape&)>& f, std::vector<Parameter*> params,
                         double eps, std::size_t max_coords) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape t;
    Var y = f(t);
    scalar_of(y);
    t.backward(y);
  }
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  auto eval = [&] {
    Tape t;
    return scalar_of(f(t));
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& w = params[k]->value;
    const auto n = static_cast<std::size_t>(w.size());
    const std::size_t stride = (max_coords == 0 || n <= max_coords) ? 1 : n / max_coords;
    for (std::size_t i = 0; i < n; i += stride) {
      const auto idx = static_cast<Index>(i);
      const double orig = w(idx);
      w(idx) = orig + eps;
      const double up = eval();
      w(idx) = orig - eps;
      const double down = eval();
      w(idx) = orig;
      worst = std::max(worst, relative_error((up - down) / (2.0 * eps), analytic[k](idx)));
    }
  }
  return worst;
}

double grad_check_directions(const std::function<Var(Tape&)>& f, std::vector<Parameter*> params, Rng& rng,
                             std::size_t directions, double eps) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape t;
    Var y = f(t);
    scalar_of(y);
    t.backward(y);
  }
  auto eval = [&] {
    Tape t;
    return scalar_of(f(t));
  };
  double worst = 0.0;
  for (Parameter* p : params) {
    const Matrix analytic = p->grad;
    const Matrix orig = p->value;
    for (std::size_t k = 0; k < directions; ++k) {
      Matrix v(orig.rows(), orig.cols());
      for (Index i = 0; i < v.size(); ++i) v(i) = uniform(rng, -1.0, 1.0);
      if (v.norm() == 0.0) continue;
      v /= v.norm();
      p->value = orig + eps * v;
      const double up = eval();
      p->value = orig - eps * v;
      const double down = eval();
      p->value = orig;
      worst = std::max(worst, relative_error((up - down) / (2.0 * eps), analytic.cwiseProduct(v).sum()));
    }
  }
  return worst;
}

}  // namespace saturn::nn
