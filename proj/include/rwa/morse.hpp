#pragma once

#include <cstddef>
#include <vector>

#include "rwa/kernels.hpp"
#include "rwa/model.hpp"

namespace rwa {

/// Morse oscillator V(x) = alpha^2 (e^{-2(x-x_e)} - 2 e^{-(x-x_e)}) on [0, L]
/// with the truncated dipole W_M(x) = x for x <= M, 0 beyond.
struct MorseSpec {
  double alpha = 10.3;
  double x_e = 2.0;
  double cutoff = 20.0;        // M
  double box_length = 40.0;    // L
  std::size_t grid_points = 4000;
  double energy_ceiling = 5.0; // discretized continuum states kept below this energy

  /// floor(alpha - 1/2): the highest bound-state index.
  std::size_t top_level() const;
  std::size_t bound_state_count() const { return top_level() + 1; }
  /// -(alpha - n - 1/2)^2
  double analytic_level(std::size_t n) const;
  double potential(double x) const;
  double dipole(double x) const;
};

/// Throws InvalidArgument on alpha <= 4.5, L <= M <= x_e, grid_points < 200, ...
void check_morse_spec(const MorseSpec& spec);

struct MorseDiagnostics {
  double grid_step = 0.0;
  std::size_t bound_states = 0;      // computed eigenvalues below zero
  std::size_t continuum_states = 0;  // retained states in [0, energy_ceiling)
  std::vector<double> computed;      // retained bound-state energies
  std::vector<double> analytic;      // -(alpha - n - 1/2)^2
  std::vector<double> abs_error;
  std::vector<double> rel_error;
};

struct MorseModel {
  QuantumModel model;
  MorseDiagnostics diagnostics;
};

/// Second-order finite-difference Dirichlet discretization, lowest eigenpairs
/// from a tridiagonal symmetric eigensolver, dipole couplings by trapezoidal
/// quadrature. Keeps the lowest n_levels bound states plus every computed
/// continuum state below the energy ceiling; 0 means all bound states.
MorseModel build_morse(const MorseSpec& spec, std::size_t n_levels = 0,
                       kernels::Execution exec = kernels::Execution::Parallel);

}  // namespace rwa
