#include "rwa/morse.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwa/errors.hpp"

namespace rwa {

std::size_t MorseSpec::top_level() const {
  return static_cast<std::size_t>(std::floor(alpha - 0.5));
}

double MorseSpec::analytic_level(std::size_t n) const {
  const double r = alpha - static_cast<double>(n) - 0.5;
  return -r * r;
}

double MorseSpec::potential(double x) const {
  const double e = std::exp(-(x - x_e));
  return alpha * alpha * (e * e - 2.0 * e);
}

double MorseSpec::dipole(double x) const { return x <= cutoff ? x : 0.0; }

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below sigma.
lapack_int eigenvalues_below(const std::vector<double>& diag, const std::vector<double>& off,
                             double sigma) {
  lapack_int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - sigma - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

void check_morse_spec(const MorseSpec& spec) {
  if (!(spec.alpha > 4.5)) throw InvalidArgument("Morse alpha must exceed 4.5 (needs N >= 4)");
  if (!(spec.x_e > 0.0)) throw InvalidArgument("Morse x_e must be positive");
  if (!(spec.cutoff > spec.x_e)) throw InvalidArgument("Morse cutoff M must exceed x_e");
  if (!(spec.box_length > spec.cutoff)) throw InvalidArgument("Morse box length L must exceed M");
  if (spec.grid_points < 200) throw InvalidArgument("Morse grid needs at least 200 points");
  if (!(spec.energy_ceiling >= 0.0)) throw InvalidArgument("energy ceiling must be >= 0");
}

MorseModel build_morse(const MorseSpec& spec, std::size_t n_levels, kernels::Execution exec) {
  check_morse_spec(spec);
  const std::size_t n_bound = spec.bound_state_count();
  if (n_levels == 0) n_levels = n_bound;
  if (n_levels > n_bound) {
    throw InvalidArgument("requested " + std::to_string(n_levels) + " bound states but only " +
                          std::to_string(n_bound) + " exist");
  }

  // Interior nodes x_i = i*h, i = 1..G; psi vanishes at 0 and L.
  const auto g = static_cast<lapack_int>(spec.grid_points);
  const double h = spec.box_length / (static_cast<double>(g) + 1.0);
  std::vector<double> diag(static_cast<std::size_t>(g));
  std::vector<double> off(static_cast<std::size_t>(g - 1), -1.0 / (h * h));
  double vmin = std::numeric_limits<double>::infinity();
  for (lapack_int i = 0; i < g; ++i) {
    const double x = (i + 1) * h;
    const double v = spec.potential(x);
    vmin = std::min(vmin, v);
    diag[static_cast<std::size_t>(i)] = 2.0 / (h * h) + v;
  }

  // The window [vmin - 1, ceiling) is sized with a Sturm count so the
  // eigenvector block handed to dstevr has exactly enough columns.
  const double lower = vmin - 1.0;
  const double upper = spec.energy_ceiling;
  const lapack_int window = eigenvalues_below(diag, off, upper) - eigenvalues_below(diag, off, lower);
  if (window <= 0) throw NumericalError("no eigenvalues below the energy ceiling");

  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(g));
  RMatrix z(g, window + 2);
  std::vector<lapack_int> isuppz(static_cast<std::size_t>(2 * (window + 2)));
  {
    std::vector<double> d = diag;
    std::vector<double> e = off;
    e.push_back(0.0);
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'V', g, d.data(), e.data(), lower, upper, 0, 0, 0.0,
                       &found, w.data(), z.data(), g, isuppz.data());
    if (info != 0) {
      throw NumericalError("tridiagonal eigensolver failed with info " + std::to_string(info));
    }
    if (found > window + 2) throw NumericalError("eigensolver returned more states than counted");
  }

  std::size_t bound_found = 0;
  for (lapack_int i = 0; i < found; ++i) {
    if (w[static_cast<std::size_t>(i)] < 0.0) ++bound_found;
  }
  if (bound_found < n_levels) {
    throw NumericalError("only " + std::to_string(bound_found) +
                         " states below zero energy; grid or box too small");
  }

  // Retained columns: lowest n_levels bound states, then every state in [0, ceiling).
  std::vector<lapack_int> keep;
  for (lapack_int i = 0; i < static_cast<lapack_int>(n_levels); ++i) keep.push_back(i);
  for (lapack_int i = static_cast<lapack_int>(bound_found); i < found; ++i) keep.push_back(i);

  const auto dim = static_cast<Eigen::Index>(keep.size());
  RMatrix states(g, dim);
  RVector lambdas(dim);
  const double norm = 1.0 / std::sqrt(h);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const lapack_int src = keep[static_cast<std::size_t>(c)];
    lambdas(c) = w[static_cast<std::size_t>(src)];
    auto col = z.col(src);
    // Sign convention: first lobe above 1e-3 of the peak is positive.
    const double peak = col.cwiseAbs().maxCoeff();
    double sign = 1.0;
    for (lapack_int i = 0; i < g; ++i) {
      if (std::abs(col(i)) > 1e-3 * peak) {
        sign = col(i) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    states.col(c) = (sign * norm) * col;
  }

  // Trapezoid on [0, L]; the endpoint values vanish, leaving h * sum over interior nodes.
  RVector weights(g);
  for (lapack_int i = 0; i < g; ++i) weights(i) = h * spec.dipole((i + 1) * h);
  const RMatrix overlaps = kernels::weighted_overlaps(states, weights, exec);
  const CMatrix coupling = Complex(0.0, -1.0) * overlaps.cast<Complex>();

  std::vector<std::string> labels;
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (static_cast<std::size_t>(c) < n_levels) {
      labels.push_back("bound_" + std::to_string(c));
    } else {
      labels.push_back("continuum_" + std::to_string(static_cast<std::size_t>(c) - n_levels));
    }
  }

  MorseDiagnostics diag_out;
  diag_out.grid_step = h;
  diag_out.bound_states = bound_found;
  diag_out.continuum_states = static_cast<std::size_t>(dim) - n_levels;
  for (std::size_t n = 0; n < n_levels; ++n) {
    const double computed = lambdas(static_cast<Eigen::Index>(n));
    const double exact = spec.analytic_level(n);
    diag_out.computed.push_back(computed);
    diag_out.analytic.push_back(exact);
    diag_out.abs_error.push_back(std::abs(computed - exact));
    diag_out.rel_error.push_back(std::abs(computed - exact) / std::abs(exact));
  }

  return {QuantumModel(std::move(lambdas), coupling, AmplitudeSet::unbounded(), std::move(labels)),
          std::move(diag_out)};
}

}  // namespace rwa
