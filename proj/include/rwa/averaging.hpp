#pragma once

#include <vector>

#include "rwa/control.hpp"
#include "rwa/model.hpp"

namespace rwa {

/// How the sign of the control enters the averaged matrix.
enum class AveragingForm {
  /// (b_lm / I) * integral of u e^{i(lambda_m - lambda_l) tau}: the time average
  /// of the interaction-picture generator, valid for signed controls.
  Signed,
  /// (b_lm / I) * integral of |u| e^{i(lambda_m - lambda_l) tau}: drops the
  /// sign factor. Agrees with Signed for non-negative controls.
  Unsigned,
};

/// M_dagger: resonant entries (gap an integer multiple of the driven gap,
/// including 0) keep their time average, all other entries vanish.
CMatrix averaged_matrix(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                        double tol = kDefaultDegeneracyTol,
                        AveragingForm form = AveragingForm::Signed);

/// Constants of the explicit convergence estimate for one transition.
struct RwaConstants {
  double T = 0.0;       // period 2 pi / |gap|
  double I = 0.0;       // L1 mass over one period
  double F = 0.0;       // |fourier coefficient at the driven gap|
  double T_star = 0.0;  // pi T / (2 |b_jk| F)
  double K = 0.0;       // I T* / T = pi / (2 |b_jk| E)
  double C = 0.0;       // sup over Lambda of |F_lm| / |sin(pi |gap_lm| / |gap|)|
  double E = 0.0;       // efficiency F / I
  double b_principal = 0.0;
  std::vector<IndexPair> Lambda;
};

/// Throws HypothesisError (with the checker report) when the hypotheses fail.
RwaConstants constants(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                       int max_harmonic = kDefaultMaxHarmonic, double tol = kDefaultDegeneracyTol);

/// I (1 + 2K||B||)(1 + C) ||pi_jk B|| / n, spectral norms throughout.
double deficit_bound(const RwaConstants& c, const QuantumModel& model, Transition t, unsigned n);

/// I (C + 1) ||B|| (1 + 2K||B||) / n: uniform bound on
/// || X(t, 0) - e^{tA} e^{v_n^{-1}(t) M_dagger} || for masses up to K.
double propagator_bound(const RwaConstants& c, const QuantumModel& model, unsigned n);

/// Sup over a uniform grid of `samples` masses in [0, K] of the propagator
/// deviation the bound above controls.
double measured_propagator_deviation(const QuantumModel& model, const PiecewiseConstantControl& u,
                                     Transition t, unsigned n, std::size_t samples,
                                     double tol = kDefaultDegeneracyTol);

/// Constants for the exact cosine control with bounded coupling. Lambda' holds
/// the coupled pairs touching {j,k} with gap at most 3/2 of the driven gap
/// that are not integer multiples of it; C is the sup of 1/|sin| over them.
struct CosineConstants {
  RwaConstants bundle;
  double stated_T_star = 0.0;  // pi / 2, kept for comparison with bundle.T_star
};

CosineConstants cosine_constants(const QuantumModel& model, Transition t,
                                 double tol = kDefaultDegeneracyTol);

/// |integral over [0,T] of e^{i omega t} cos(2 pi t / T) dt / sin(omega T / 2)|,
/// evaluated in closed form: 2 omega T^2 / |omega^2 T^2 - 4 pi^2|.
double cosine_resonance_ratio(double omega, double period);

/// e^{v_n(mass) A} e^{mass M_dagger} x0.
CVector predicted_state(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                        unsigned n, double mass, const CVector& x0,
                        double tol = kDefaultDegeneracyTol);

}  // namespace rwa
