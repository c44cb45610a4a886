#pragma once

#include <span>
#include <vector>

#include "saturn/nn/tape.hpp"
#include "saturn/util/random.hpp"

namespace saturn::nn {

// Differentiable operations. All inputs must live on the same tape; shape
// mismatches throw ShapeError.

Var matmul(const Var& a, const Var& b);
/// w times a constant sparse matrix; only w receives a gradient.
Var matmul_sparse(const Var& w, const SparseMatrix& x);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
/// a (r x c) plus column vector v (r x 1) added to every column.
Var add_bias(const Var& a, const Var& v);
/// W x + b, with b broadcast over the columns of x.
Var linear(const Var& x, const Var& w, const Var& b);
Var scale(const Var& a, double s);
Var hadamard(const Var& a, const Var& b);
Var transpose(const Var& a);

Var relu(const Var& a);
Var tanh(const Var& a);
Var exp(const Var& a);

/// 1x1 sum of all entries.
Var sum(const Var& a);
/// 1x1 mean of all entries.
Var mean(const Var& a);
/// Single entry as a 1x1 value.
Var pick(const Var& a, Index row, Index col = 0);

/// Stacks vertically; all parts need the same column count.
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);
/// Places parts side by side; all parts need the same row count.
Var hcat(std::span<const Var> parts);
Var select_columns(const Var& a, std::span<const Index> columns);
/// Columns [start, start + count) of a.
Var column_block(const Var& a, Index start, Index count);

/// Column mean (r x 1).
Var mean_pool(const Var& a);
/// Row-wise max over columns (r x 1). Gradient goes to the argmax entry,
/// ties broken towards the lowest column index.
Var max_pool_columns(const Var& a);

/// Normalises every column to zero mean and unit variance, then applies
/// gain and bias (both r x 1). A constant column maps to `bias`.
Var layer_norm(const Var& x, const Var& gain, const Var& bias, double eps = 1e-5);

/// Training mode zeroes each entry with probability p and scales the rest
/// by 1/(1-p). Eval mode (or p = 0) returns `x` itself.
Var dropout(const Var& x, double p, bool training, Rng& rng);

/// log softmax(v / tau) over a column vector, max-shifted.
Var log_softmax(const Var& v, double tau = 1.0);
/// -sum(exp(l) * l) for a vector of log-probabilities.
Var entropy_from_log(const Var& log_probs);

// Plain (non-recorded) helpers.

/// softmax(v / tau); throws std::invalid_argument for tau <= 0 or empty v.
Vector softmax(const Vector& v, double tau = 1.0);
/// First index of the largest entry.
Index argmax(const Vector& v);

}  // namespace saturn::nn
