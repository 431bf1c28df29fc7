#pragma once

#include <vector>

#include "rwa/clock.hpp"
#include "rwa/control.hpp"
#include "rwa/kernels.hpp"
#include "rwa/model.hpp"

namespace rwa {

/// exp(dt (A + u B)) for one constant control value. dt may be negative.
CMatrix exp_step(const QuantumModel& model, double u_value, double dt);

/// Which bilinear system a control drives.
enum class Dynamics {
  Standard,  // x' = (A + u B) x
  Swapped,   // x' = (|u| A + sgn(u) B) x; equals (u A + B) x for positive u
};

/// Exact propagator of a periodic piecewise-constant control. The per-piece
/// exponentials (one per distinct (value, duration) pair) and the one-period
/// product are computed once at construction; afterwards the object is
/// immutable and safe to share across threads.
class ControlledEvolution {
 public:
  ControlledEvolution(const QuantumModel& model, const PiecewiseConstantControl& u,
                      Dynamics dynamics = Dynamics::Standard,
                      kernels::Execution exec = kernels::Execution::Parallel);

  /// X(t, s) x0. For t < s the inverse flow X(s, t)^dagger is applied.
  CVector apply(double s, double t, const CVector& x0) const;
  /// The full propagator X(t, s).
  CMatrix matrix(double s, double t) const;

  const CMatrix& period_matrix() const { return period_; }
  const PiecewiseConstantControl& control() const { return control_; }
  const QuantumModel& model() const { return model_; }
  std::size_t distinct_steps() const { return steps_.size(); }

 private:
  template <class Operand>
  void advance(double s, double t, Operand& x) const;
  CMatrix partial_step(std::size_t piece, double dt) const;

  QuantumModel model_;
  PiecewiseConstantControl control_;
  Dynamics dynamics_;
  std::vector<CMatrix> steps_;
  std::vector<std::size_t> piece_step_;
  CMatrix period_;
};

/// Solution of x' = (A + u(t) B) x from x(s) = x0 to time t >= s.
CVector propagate(const QuantumModel& model, const PiecewiseConstantControl& u, double s, double t,
                  const CVector& x0);

/// Same for the swapped system x' = (u(t) A + B) x (sign-folded for u < 0).
CVector propagate_swapped(const QuantumModel& model, const PiecewiseConstantControl& u, double s,
                          double t, const CVector& x0);

/// Canonical basis vector phi_i.
CVector basis_state(std::size_t dim, std::size_t i);

struct TrajectorySample {
  double mass = 0.0;  // accumulated L1 mass of u/n
  double time = 0.0;  // v_n(mass)
  CVector lab;        // x_n(time)
  CVector interaction;  // z_n(mass) = e^{-time A} x_n(time)
};

/// Interaction-picture trajectory of the control u/n sampled on an increasing
/// grid of accumulated masses.
std::vector<TrajectorySample> interaction_trajectory(const QuantumModel& model,
                                                     const PiecewiseConstantControl& u, unsigned n,
                                                     const std::vector<double>& mass_grid,
                                                     const CVector& x0);

/// M_n(mass) = sg(u_n(v_n)) e^{-v_n A} B e^{v_n A}, built entrywise.
CMatrix m_n_matrix(const QuantumModel& model, const PiecewiseConstantControl& u, unsigned n,
                   double mass);

/// Integral over [0, mass] of the (j,k) entry of M_n - M_dagger, in closed form.
/// The averaged matrix is taken for the driven transition t.
Complex h_integral(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                   unsigned n, IndexPair entry, double mass);

/// Right-hand side of the averaging-error estimate for entry (j,k):
/// 2|b_jk| I / n for resonant entries, otherwise
/// |b_jk| / n * (|F(lambda_j - lambda_k)| / |sin(pi (lambda_j - lambda_k) / gap)| + I).
double h_integral_bound(const QuantumModel& model, const PiecewiseConstantControl& u,
                        Transition t, unsigned n, IndexPair entry);

struct TransferResult {
  double t_star_n = 0.0;  // v*(n K)
  double n_t_star = 0.0;  // n T*
  double deficit = 0.0;   // 1 - |<phi_k, X(T*_n, 0) phi_j>|
};

/// Population-transfer deficit at T*_n for the control u/n. Throws
/// HypothesisError if the averaging hypotheses fail, NumericalError if T*_n
/// leaves (n T* - T, n T* + T).
TransferResult transfer_deficit(const QuantumModel& model, const PiecewiseConstantControl& u,
                                unsigned n, Transition t, int max_harmonic = kDefaultMaxHarmonic,
                                double tol = kDefaultDegeneracyTol);

struct CommutatorDefect {
  double lhs = 0.0;  // || [pi_jk, X_(N)(v_n(mass), 0)] ||
  double rhs = 0.0;  // 4 || E ||
  double e_norm = 0.0;          // || X - e^{tA} e^{mass M_dagger} ||
  double e_norm_no_phase = 0.0;  // || X - e^{mass M_dagger} ||
};

/// Commutator of the Galerkin propagator with the projection onto {j,k}
/// against four times the averaging error, at accumulated mass `mass`.
CommutatorDefect commutator_defect(const QuantumModel& model, const PiecewiseConstantControl& u,
                                   Transition t, unsigned n, std::size_t galerkin_dim, double mass,
                                   double tol = kDefaultDegeneracyTol);

}  // namespace rwa
