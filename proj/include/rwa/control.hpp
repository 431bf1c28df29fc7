#pragma once

#include <span>
#include <string>
#include <vector>

#include "rwa/model.hpp"
#include "rwa/types.hpp"

namespace rwa {

struct Piece {
  double value = 0.0;
  double duration = 0.0;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Periodic piecewise-constant control. One period is the listed pieces in
/// order; the signal repeats with period T = sum of durations.
class PiecewiseConstantControl {
 public:
  explicit PiecewiseConstantControl(std::vector<Piece> pieces);

  std::span<const Piece> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  double period() const { return starts_.back(); }
  /// Start of piece i within the period; start(size()) == period().
  double start(std::size_t i) const { return starts_[i]; }
  /// Index of the piece containing offset r in [0, T).
  std::size_t piece_at(double offset) const;
  /// u(t) with periodic extension; right-continuous.
  double value_at(double t) const;
  bool has_zero_piece() const;

 private:
  std::vector<Piece> pieces_;
  std::vector<double> starts_;
};

/// Builders replace exact zeros with this magnitude so the time
/// reparametrization stays defined.
inline constexpr double kZeroPerturbation = 1e-12;
/// Relative tolerance when matching a control period to 2*pi/|gap|.
inline constexpr double kPeriodTol = 1e-9;

/// u/n: values divided by n, durations unchanged.
PiecewiseConstantControl scale(const PiecewiseConstantControl& u, unsigned n);

/// Piecewise involution (u_j, t_j) -> (1/u_j, |u_j| t_j). Signs stay on the value.
PiecewiseConstantControl reparametrize(const PiecewiseConstantControl& u);

/// I = integral of |u| over one period.
double l1_mass(const PiecewiseConstantControl& u);

/// Integral over one period of u(tau) e^{i omega tau}, in closed form.
Complex fourier_coefficient(const PiecewiseConstantControl& u, double omega);

/// Integral over [0, t] of u(tau) e^{i omega tau} with u extended periodically.
Complex partial_fourier(const PiecewiseConstantControl& u, double omega, double t);

/// Throws InvalidArgument unless the period is 2*pi/|lambda_j - lambda_k|
/// within relative tolerance kPeriodTol.
void check_period(const PiecewiseConstantControl& u, const QuantumModel& model, Transition t);

/// |fourier_coefficient(u, lambda_j - lambda_k)| / l1_mass(u), in [0, 1].
double efficiency(const PiecewiseConstantControl& u, const QuantumModel& model, Transition t);

struct ResonanceCheck {
  ResonantPair pair;
  double magnitude = 0.0;
  bool pass = false;
};

struct HypothesisReport {
  NondegeneracyResult nondegeneracy;
  std::vector<ResonanceCheck> resonances;
  double principal_magnitude = 0.0;  // F
  double l1 = 0.0;                   // I
  bool principal_pass = false;
  bool amplitude_pass = true;  // control values inside the model's amplitude set
  bool verdict = false;

  std::string to_text() const;
};

/// Checks every hypothesis of the averaging theorem for transition t.
/// Fourier magnitudes are compared against tol * l1_mass(u).
HypothesisReport check_theorem_hypotheses(const PiecewiseConstantControl& u,
                                          const QuantumModel& model, Transition t,
                                          int max_harmonic = kDefaultMaxHarmonic,
                                          double tol = kDefaultDegeneracyTol);

/// Midpoint samples of cos(omega t), pieces_per_period even and >= 8.
PiecewiseConstantControl sample_cosine(double omega, std::size_t pieces_per_period);

/// +amplitude pulse of width delta*T centred on t = 0, -amplitude pulse
/// centred on T/2, (perturbed) zero elsewhere.
PiecewiseConstantControl pulse_train(double omega, double width_fraction, double amplitude);

/// +amplitude on [0, T/2), -amplitude on [T/2, T).
PiecewiseConstantControl square_wave(double omega, double amplitude = 1.0);

}  // namespace rwa
