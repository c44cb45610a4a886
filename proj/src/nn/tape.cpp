#include "saturn/nn/tape.hpp"

#include <string>

namespace saturn::nn {

Var Tape::constant(Matrix value) { return record(std::move(value), false, {}, "constant"); }

Var Tape::variable(Matrix value) { return record(std::move(value), true, {}, "variable"); }

Var Tape::parameter(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  Var v = record(p.value, true, {}, "parameter");
  nodes_[v.id()].param = &p;
  param_nodes_.emplace(&p, v.id());
  return v;
}

Var Tape::record(Matrix value, bool needs_grad, Backward backward, const char* op) {
  if (!value.allFinite()) throw NumericError(std::string("non-finite value produced by ") + op);
  nodes_.push_back(Node{std::move(value), {}, needs_grad ? std::move(backward) : Backward{},
                        nullptr, needs_grad});
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(const Var& loss) {
  if (loss.tape() != this) throw std::invalid_argument("loss is not on this tape");
  const Node& l = nodes_[loss.id()];
  if (l.value.rows() != 1 || l.value.cols() != 1)
    throw ShapeError("backward needs a scalar loss, got " + shape_string(l.value));
  for (Node& n : nodes_) n.grad.resize(0, 0);
  if (!l.needs_grad) return;
  nodes_[loss.id()].grad = Matrix::Ones(1, 1);
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    if (!n.grad.allFinite()) throw NumericError("non-finite gradient");
    if (n.backward) n.backward(*this, n.grad);
    if (n.param != nullptr) {
      if (n.param->grad.rows() != n.grad.rows() || n.param->grad.cols() != n.grad.cols())
        n.param->zero_grad();
      n.param->grad += n.grad;
    }
  }
}

Matrix Tape::grad(const Var& v) const {
  const Node& n = nodes_[v.id()];
  if (n.grad.size() == 0) return Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

}  // namespace saturn::nn
