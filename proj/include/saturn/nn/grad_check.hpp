#pragma once

#include <functional>
#include <vector>

#include "saturn/nn/tape.hpp"

namespace saturn::nn {

/// |g_fd - g_bp| / max(1e-8, |g_fd| + |g_bp|)
double relative_error(double fd, double bp);

/// Compares the tape gradient of scalar `f` at `x` with central
/// differences and returns the worst relative error over coordinates.
///
/// Neither check moves inputs off kinks (relu at 0, ties in max pooling);
/// callers pick inputs away from them.
double grad_check(const std::function<Var(Tape&, const Var&)>& f, const Matrix& x,
                  double eps = 1e-5);

/// Same check against parameters: `f` builds the loss on a fresh tape each
/// call. At most `max_coords` coordinates per parameter are probed, spread
/// evenly; 0 means all.
double grad_check_params(const std::function<Var(Tape&)>& f, std::vector<Parameter*> params,
                         double eps = 1e-5, std::size_t max_coords = 0);

/// Directional version for deep pipelines: for each parameter and each of
/// `directions` random unit directions v, compares the central difference of
/// f along v with grad . v. Single coordinates whose gradient is below the
/// f64 resolution of a central difference (about 1e-6 for O(1) losses at
/// eps 1e-5) cannot be checked one by one; their sum along v can.
double grad_check_directions(const std::function<Var(Tape&)>& f, std::vector<Parameter*> params, Rng& rng,
                             std::size_t directions = 3, double eps = 1e-5);

}  // namespace saturn::nn
