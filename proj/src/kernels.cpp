#include "rwa/kernels.hpp"

#include <omp.h>

#include <exception>

#include "rwa/linalg.hpp"

namespace rwa::kernels {

namespace {
int g_thread_limit = 0;

int team_size() { return g_thread_limit > 0 ? g_thread_limit : omp_get_max_threads(); }
}  // namespace

void set_thread_limit(int threads) { g_thread_limit = threads > 0 ? threads : 0; }

int thread_limit() { return team_size(); }

RMatrix weighted_overlaps(const RMatrix& states, const RVector& weights, Execution exec) {
  const Eigen::Index n = states.cols();
  const Eigen::Index g = states.rows();
  RMatrix s(n, n);
  // Flattened upper triangle so the parallel split is balanced.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j; k < n; ++k) pairs.emplace_back(j, k);
  const auto count = static_cast<long>(pairs.size());

  auto entry = [&](long p) {
    const auto [j, k] = pairs[static_cast<std::size_t>(p)];
    double acc = 0.0;
    for (Eigen::Index i = 0; i < g; ++i) acc += weights(i) * states(i, j) * states(i, k);
    s(j, k) = acc;
    s(k, j) = acc;
  };

  if (exec == Execution::Serial) {
    for (long p = 0; p < count; ++p) entry(p);
  } else {
#pragma omp parallel for schedule(dynamic, 8) num_threads(team_size())
    for (long p = 0; p < count; ++p) entry(p);
  }
  return s;
}

std::vector<CMatrix> step_exponentials(const QuantumModel& model, std::span<const StepSpec> steps,
                                       Execution exec) {
  std::vector<CMatrix> out(steps.size());
  const auto count = static_cast<long>(steps.size());
  auto one = [&](long i) {
    const StepSpec& s = steps[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = expm_skew_hermitian(model.generator(s.a, s.c), s.dt);
  };
  if (exec == Execution::Serial) {
    for (long i = 0; i < count; ++i) one(i);
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(team_size())
    for (long i = 0; i < count; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical(rwa_step_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

}  // namespace rwa::kernels
