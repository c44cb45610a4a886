#pragma once

#include <deque>
#include <functional>
#include <unordered_map>

#include "saturn/nn/params.hpp"
#include "saturn/nn/tensor.hpp"

namespace saturn::nn {

class Tape;

/// Handle to a value recorded on a tape.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  [[nodiscard]] const Matrix& value() const;
  [[nodiscard]] Index rows() const { return value().rows(); }
  [[nodiscard]] Index cols() const { return value().cols(); }
  [[nodiscard]] Tape* tape() const noexcept { return tape_; }
  [[nodiscard]] std::size_t id() const noexcept { return id_; }
  [[nodiscard]] bool valid() const noexcept { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Append-only record of operations for reverse-mode differentiation.
///
/// Each recorded node keeps its forward value and a closure that pushes
/// the node's gradient into its inputs. `backward` visits nodes in reverse
/// creation order, which is a reverse topological order. Parameter leaves
/// add their gradient into `Parameter::grad`.
class Tape {
 public:
  using Backward = std::function<void(Tape&, const Matrix& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  /// Leaf whose gradient is kept and can be read with `grad`.
  Var variable(Matrix value);
  /// Leaf bound to `p`; repeated calls return the same node, which holds
  /// the value at the time of the first call.
  Var parameter(Parameter& p);

  /// Records an op result. `backward` may be empty when no input needs a
  /// gradient. Throws NumericError if `value` is not finite.
  Var record(Matrix value, bool needs_grad, Backward backward, const char* op);

  void backward(const Var& loss);

  [[nodiscard]] const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  [[nodiscard]] bool needs_grad(const Var& v) const { return nodes_[v.id()].needs_grad; }
  /// Gradient of a node after `backward`; zeros if nothing reached it.
  [[nodiscard]] Matrix grad(const Var& v) const;
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

  template <typename Derived>
  void accumulate(const Var& v, const Eigen::MatrixBase<Derived>& g) {
    Node& n = nodes_[v.id()];
    if (!n.needs_grad) return;
    if (n.grad.size() == 0) {
      n.grad = g;
    } else {
      n.grad += g;
    }
  }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Backward backward;
    Parameter* param = nullptr;
    bool needs_grad = false;
  };
  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }

}  // namespace saturn::nn
