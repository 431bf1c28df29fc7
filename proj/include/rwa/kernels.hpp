#pragma once

#include <span>
#include <vector>

#include "rwa/model.hpp"
#include "rwa/types.hpp"

// Data-parallel inner loops. Each kernel has a serial reference path that the
// tests compare against; the parallel path uses OpenMP and must produce the
// same values bit for bit (every output element is computed by one thread in
// the same order as the serial loop).
namespace rwa::kernels {

enum class Execution { Serial, Parallel };

/// Caps the OpenMP team size for the parallel paths. 0 restores the default.
void set_thread_limit(int threads);
int thread_limit();

/// Weighted overlap matrix S_jk = sum_i w_i * psi_j(x_i) * psi_k(x_i) for
/// grid functions stored column-wise in `states` (rows = grid points).
RMatrix weighted_overlaps(const RMatrix& states, const RVector& weights, Execution exec);

/// One constant-control step exp(dt * (a*A + c*B)).
struct StepSpec {
  double a = 0.0;
  double c = 0.0;
  double dt = 0.0;
};

std::vector<CMatrix> step_exponentials(const QuantumModel& model, std::span<const StepSpec> steps,
                                       Execution exec);

}  // namespace rwa::kernels
