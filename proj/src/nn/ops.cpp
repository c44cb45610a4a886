#include "saturn/nn/ops.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <string>

namespace saturn::nn {
namespace {

Tape& tape_of(const Var& a) {
  if (!a.valid()) throw std::invalid_argument("uninitialised Var");
  return *a.tape();
}

Tape& tape_of(const Var& a, const Var& b) {
  Tape& t = tape_of(a);
  if (b.tape() != &t) throw std::invalid_argument("operands live on different tapes");
  return t;
}

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.value()) + " vs " +
                     shape_string(b.value()));
}

bool any_grad(Tape& t, std::initializer_list<Var> vs) {
  for (const Var& v : vs)
    if (t.needs_grad(v)) return true;
  return false;
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + shape_string(a.value()) + " x " + shape_string(b.value()));
  Matrix out = a.value() * b.value();
  return t.record(std::move(out), any_grad(t, {a, b}),
                  [a, b](Tape& t, const Matrix& g) {
                    if (t.needs_grad(a)) t.accumulate(a, g * b.value().transpose());
                    if (t.needs_grad(b)) t.accumulate(b, a.value().transpose() * g);
                  },
                  "matmul");
}

Var matmul_sparse(const Var& w, const SparseMatrix& x) {
  Tape& t = tape_of(w);
  if (w.cols() != x.rows())
    throw ShapeError("matmul_sparse: " + shape_string(w.value()) + " x [" + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + "]");
  Matrix out = w.value() * x;
  auto xs = std::make_shared<const SparseMatrix>(x);
  return t.record(std::move(out), t.needs_grad(w),
                  [w, xs](Tape& t, const Matrix& g) {
                    Matrix d = g * xs->transpose();
                    t.accumulate(w, d);
                  },
                  "matmul_sparse");
}

Var add(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  require_same_shape(a, b, "add");
  Matrix out = a.value() + b.value();
  return t.record(std::move(out), any_grad(t, {a, b}),
                  [a, b](Tape& t, const Matrix& g) {
                    t.accumulate(a, g);
                    t.accumulate(b, g);
                  },
                  "add");
}

Var sub(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  require_same_shape(a, b, "sub");
  Matrix out = a.value() - b.value();
  return t.record(std::move(out), any_grad(t, {a, b}),
                  [a, b](Tape& t, const Matrix& g) {
                    t.accumulate(a, g);
                    if (t.needs_grad(b)) t.accumulate(b, -g);
                  },
                  "sub");
}

Var add_bias(const Var& a, const Var& v) {
  Tape& t = tape_of(a, v);
  if (v.cols() != 1 || v.rows() != a.rows())
    throw ShapeError("add_bias: " + shape_string(a.value()) + " + " + shape_string(v.value()));
  Matrix out = a.value().colwise() + v.value().col(0);
  return t.record(std::move(out), any_grad(t, {a, v}),
                  [a, v](Tape& t, const Matrix& g) {
                    t.accumulate(a, g);
                    if (t.needs_grad(v)) t.accumulate(v, g.rowwise().sum());
                  },
                  "add_bias");
}

Var linear(const Var& x, const Var& w, const Var& b) { return add_bias(matmul(w, x), b); }

Var scale(const Var& a, double s) {
  Tape& t = tape_of(a);
  Matrix out = a.value() * s;
  return t.record(std::move(out), t.needs_grad(a),
                  [a, s](Tape& t, const Matrix& g) { t.accumulate(a, g * s); }, "scale");
}

Var hadamard(const Var& a, const Var& b) {
  Tape& t = tape_of(a, b);
  require_same_shape(a, b, "hadamard");
  Matrix out = a.value().cwiseProduct(b.value());
  return t.record(std::move(out), any_grad(t, {a, b}),
                  [a, b](Tape& t, const Matrix& g) {
                    if (t.needs_grad(a)) t.accumulate(a, g.cwiseProduct(b.value()));
                    if (t.needs_grad(b)) t.accumulate(b, g.cwiseProduct(a.value()));
                  },
                  "hadamard");
}

Var transpose(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = a.value().transpose();
  return t.record(std::move(out), t.needs_grad(a),
                  [a](Tape& t, const Matrix& g) { t.accumulate(a, g.transpose()); }, "transpose");
}

Var relu(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = a.value().cwiseMax(0.0);
  return t.record(std::move(out), t.needs_grad(a),
                  [a](Tape& t, const Matrix& g) {
                    t.accumulate(a, (a.value().array() > 0.0).select(g.array(), 0.0).matrix());
                  },
                  "relu");
}

Var tanh(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = a.value().array().tanh().matrix();
  const std::size_t self = t.size();
  return t.record(std::move(out), t.needs_grad(a),
                  [a, self](Tape& t, const Matrix& g) {
                    const Matrix& y = t.value(self);
                    t.accumulate(a, g.cwiseProduct((1.0 - y.array().square()).matrix()));
                  },
                  "tanh");
}

Var exp(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = a.value().array().exp().matrix();
  const std::size_t self = t.size();
  return t.record(std::move(out), t.needs_grad(a),
                  [a, self](Tape& t, const Matrix& g) {
                    t.accumulate(a, g.cwiseProduct(t.value(self)));
                  },
                  "exp");
}

Var sum(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = Matrix::Constant(1, 1, a.value().sum());
  return t.record(std::move(out), t.needs_grad(a),
                  [a](Tape& t, const Matrix& g) {
                    t.accumulate(a, Matrix::Constant(a.rows(), a.cols(), g(0, 0)));
                  },
                  "sum");
}

Var mean(const Var& a) {
  if (a.value().size() == 0) throw ShapeError("mean of empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var pick(const Var& a, Index row, Index col) {
  Tape& t = tape_of(a);
  if (row < 0 || row >= a.rows() || col < 0 || col >= a.cols())
    throw ShapeError("pick: index out of range for " + shape_string(a.value()));
  Matrix out = Matrix::Constant(1, 1, a.value()(row, col));
  return t.record(std::move(out), t.needs_grad(a),
                  [a, row, col](Tape& t, const Matrix& g) {
                    Matrix d = Matrix::Zero(a.rows(), a.cols());
                    d(row, col) = g(0, 0);
                    t.accumulate(a, d);
                  },
                  "pick");
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat of nothing");
  Tape& t = tape_of(parts[0]);
  Index rows = 0;
  bool needs = false;
  for (const Var& p : parts) {
    tape_of(parts[0], p);
    if (p.cols() != parts[0].cols()) throw ShapeError("concat: column counts differ");
    rows += p.rows();
    needs = needs || t.needs_grad(p);
  }
  Matrix out(rows, parts[0].cols());
  Index r = 0;
  for (const Var& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return t.record(std::move(out), needs,
                  [saved](Tape& t, const Matrix& g) {
                    Index r = 0;
                    for (const Var& p : saved) {
                      if (t.needs_grad(p)) t.accumulate(p, g.middleRows(r, p.rows()));
                      r += p.rows();
                    }
                  },
                  "concat");
}

Var concat(std::initializer_list<Var> parts) {
  return concat(std::span<const Var>(parts.begin(), parts.size()));
}

Var hcat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("hcat of nothing");
  Tape& t = tape_of(parts[0]);
  Index cols = 0;
  bool needs = false;
  for (const Var& p : parts) {
    tape_of(parts[0], p);
    if (p.rows() != parts[0].rows()) throw ShapeError("hcat: row counts differ");
    cols += p.cols();
    needs = needs || t.needs_grad(p);
  }
  Matrix out(parts[0].rows(), cols);
  Index c = 0;
  for (const Var& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return t.record(std::move(out), needs,
                  [saved](Tape& t, const Matrix& g) {
                    Index c = 0;
                    for (const Var& p : saved) {
                      if (t.needs_grad(p)) t.accumulate(p, g.middleCols(c, p.cols()));
                      c += p.cols();
                    }
                  },
                  "hcat");
}

Var select_columns(const Var& a, std::span<const Index> columns) {
  Tape& t = tape_of(a);
  Matrix out(a.rows(), static_cast<Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] < 0 || columns[i] >= a.cols())
      throw ShapeError("select_columns: column out of range");
    out.col(static_cast<Index>(i)) = a.value().col(columns[i]);
  }
  std::vector<Index> cols(columns.begin(), columns.end());
  return t.record(std::move(out), t.needs_grad(a),
                  [a, cols](Tape& t, const Matrix& g) {
                    Matrix d = Matrix::Zero(a.rows(), a.cols());
                    for (std::size_t i = 0; i < cols.size(); ++i)
                      d.col(cols[i]) += g.col(static_cast<Index>(i));
                    t.accumulate(a, d);
                  },
                  "select_columns");
}

Var column_block(const Var& a, Index start, Index count) {
  Tape& t = tape_of(a);
  if (start < 0 || count < 0 || start + count > a.cols()) throw ShapeError("column_block: range out of bounds");
  Matrix out = a.value().middleCols(start, count);
  return t.record(std::move(out), t.needs_grad(a),
                  [a, start, count](Tape& t, const Matrix& g) {
                    Matrix d = Matrix::Zero(a.rows(), a.cols());
                    d.middleCols(start, count) = g;
                    t.accumulate(a, d);
                  },
                  "column_block");
}

Var mean_pool(const Var& a) {
  Tape& t = tape_of(a);
  if (a.cols() == 0) throw ShapeError("mean_pool over zero columns");
  const double n = static_cast<double>(a.cols());
  Matrix out = a.value().rowwise().sum() / n;
  return t.record(std::move(out), t.needs_grad(a),
                  [a, n](Tape& t, const Matrix& g) {
                    t.accumulate(a, (g.col(0) / n).replicate(1, a.cols()));
                  },
                  "mean_pool");
}

Var max_pool_columns(const Var& a) {
  Tape& t = tape_of(a);
  if (a.cols() == 0) throw ShapeError("max_pool_columns over zero columns");
  const Matrix& x = a.value();
  std::vector<Index> arg(static_cast<std::size_t>(x.rows()), 0);
  Matrix out(x.rows(), 1);
  for (Index r = 0; r < x.rows(); ++r) {
    Index best = 0;
    for (Index c = 1; c < x.cols(); ++c)
      if (x(r, c) > x(r, best)) best = c;
    arg[static_cast<std::size_t>(r)] = best;
    out(r, 0) = x(r, best);
  }
  return t.record(std::move(out), t.needs_grad(a),
                  [a, arg = std::move(arg)](Tape& t, const Matrix& g) {
                    Matrix d = Matrix::Zero(a.rows(), a.cols());
                    for (Index r = 0; r < a.rows(); ++r) d(r, arg[static_cast<std::size_t>(r)]) = g(r, 0);
                    t.accumulate(a, d);
                  },
                  "max_pool_columns");
}

Var layer_norm(const Var& x, const Var& gain, const Var& bias, double eps) {
  Tape& t = tape_of(x, gain);
  tape_of(x, bias);
  const Index n = x.rows();
  if (n == 0) throw ShapeError("layer_norm of empty vector");
  if (gain.rows() != n || gain.cols() != 1 || bias.rows() != n || bias.cols() != 1)
    throw ShapeError("layer_norm: gain/bias must be " + std::to_string(n) + "x1");
  const Matrix& xv = x.value();
  const Eigen::RowVectorXd mu = xv.colwise().mean();
  Matrix centered = xv.rowwise() - mu;
  const Eigen::RowVectorXd inv_std =
      ((centered.array().square().colwise().sum() / static_cast<double>(n)) + eps).rsqrt();
  Matrix xhat = centered.array().rowwise() * inv_std.array();
  Matrix out = (xhat.array().colwise() * gain.value().col(0).array()).matrix();
  out.colwise() += bias.value().col(0);
  return t.record(
      std::move(out), any_grad(t, {x, gain, bias}),
      [x, gain, bias, xhat = std::move(xhat), inv_std](Tape& t, const Matrix& g) {
        if (t.needs_grad(bias)) t.accumulate(bias, g.rowwise().sum());
        if (t.needs_grad(gain)) t.accumulate(gain, g.cwiseProduct(xhat).rowwise().sum());
        if (t.needs_grad(x)) {
          const double n = static_cast<double>(xhat.rows());
          Matrix dxhat = g.array().colwise() * gain.value().col(0).array();
          const Eigen::RowVectorXd m1 = dxhat.colwise().sum() / n;
          const Eigen::RowVectorXd m2 = dxhat.cwiseProduct(xhat).colwise().sum() / n;
          Matrix dx = dxhat.rowwise() - m1;
          dx -= (xhat.array().rowwise() * m2.array()).matrix();
          dx = (dx.array().rowwise() * inv_std.array()).matrix();
          t.accumulate(x, dx);
        }
      },
      "layer_norm");
}

Var dropout(const Var& x, double p, bool training, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout probability must be in [0, 1)");
  if (!training || p == 0.0) return x;
  Tape& t = tape_of(x);
  const double keep_scale = 1.0 / (1.0 - p);
  Matrix mask(x.rows(), x.cols());
  for (Index c = 0; c < x.cols(); ++c)
    for (Index r = 0; r < x.rows(); ++r) mask(r, c) = uniform01(rng) < p ? 0.0 : keep_scale;
  Matrix out = x.value().cwiseProduct(mask);
  return t.record(std::move(out), t.needs_grad(x),
                  [x, mask = std::move(mask)](Tape& t, const Matrix& g) {
                    t.accumulate(x, g.cwiseProduct(mask));
                  },
                  "dropout");
}

Var log_softmax(const Var& v, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  Tape& t = tape_of(v);
  if (v.cols() != 1 || v.rows() == 0) throw ShapeError("log_softmax expects a non-empty column");
  const Vector z = v.value().col(0) / tau;
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  Matrix out = (z.array() - lse).matrix();
  const std::size_t self = t.size();
  return t.record(std::move(out), t.needs_grad(v),
                  [v, tau, self](Tape& t, const Matrix& g) {
                    const Matrix p = t.value(self).array().exp().matrix();
                    t.accumulate(v, (g - p * g.sum()) / tau);
                  },
                  "log_softmax");
}

Var entropy_from_log(const Var& log_probs) {
  return scale(sum(hadamard(exp(log_probs), log_probs)), -1.0);
}

Vector softmax(const Vector& v, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (v.size() == 0) throw std::invalid_argument("softmax of empty vector");
  const Vector z = v / tau;
  Vector e = (z.array() - z.maxCoeff()).exp().matrix();
  return e / e.sum();
}

Index argmax(const Vector& v) {
  if (v.size() == 0) throw std::invalid_argument("argmax of empty vector");
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

}  // namespace saturn::nn
