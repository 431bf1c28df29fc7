#include "rwa/propagate.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "rwa/averaging.hpp"
#include "rwa/errors.hpp"
#include "rwa/linalg.hpp"

namespace rwa {

namespace {

kernels::StepSpec step_spec(Dynamics dyn, double value, double dt) {
  if (dyn == Dynamics::Standard) return {1.0, value, dt};
  const double sign = value > 0.0 ? 1.0 : (value < 0.0 ? -1.0 : 0.0);
  return {std::abs(value), sign, dt};
}

}  // namespace

CMatrix exp_step(const QuantumModel& model, double u_value, double dt) {
  return expm_skew_hermitian(model.generator(1.0, u_value), dt);
}

ControlledEvolution::ControlledEvolution(const QuantumModel& model,
                                         const PiecewiseConstantControl& u, Dynamics dynamics,
                                         kernels::Execution exec)
    : model_(model), control_(u), dynamics_(dynamics) {
  // One exponential per distinct (value, duration); periodic controls such as
  // sampled cosines repeat values within a period.
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<kernels::StepSpec> specs;
  piece_step_.reserve(u.size());
  for (const auto& p : u.pieces()) {
    const auto [it, inserted] = index.try_emplace({p.value, p.duration}, specs.size());
    if (inserted) specs.push_back(step_spec(dynamics_, p.value, p.duration));
    piece_step_.push_back(it->second);
  }
  steps_ = kernels::step_exponentials(model_, specs, exec);
  const auto d = static_cast<Eigen::Index>(model_.dim());
  period_ = CMatrix::Identity(d, d);
  for (std::size_t i = 0; i < u.size(); ++i) period_ = steps_[piece_step_[i]] * period_;
}

CMatrix ControlledEvolution::partial_step(std::size_t piece, double dt) const {
  const auto s = step_spec(dynamics_, control_.pieces()[piece].value, dt);
  return expm_skew_hermitian(model_.generator(s.a, s.c), s.dt);
}

template <class Operand>
void ControlledEvolution::advance(double s, double t, Operand& x) const {
  if (!(t > s)) return;
  const double period = control_.period();
  double cycle = std::floor(s / period);
  double offset = s - cycle * period;
  if (offset >= period) {
    cycle += 1.0;
    offset = 0.0;
  }
  std::size_t i = control_.piece_at(offset);
  bool at_start = offset == control_.start(i);
  double cur = s;

  for (;;) {
    if (i == 0 && at_start) {
      double whole = std::floor((t - cycle * period) / period);
      while (whole > 0.0 && (cycle + whole) * period > t) whole -= 1.0;
      for (double w = 0.0; w < whole; w += 1.0) x = period_ * x;
      cycle += whole;
      cur = cycle * period;
      if (cur >= t) return;
    }
    const double piece_end = cycle * period + control_.start(i + 1);
    if (at_start && piece_end <= t) {
      x = steps_[piece_step_[i]] * x;
    } else {
      const double dt = std::min(piece_end, t) - cur;
      if (dt > 0.0) x = partial_step(i, dt) * x;
    }
    if (piece_end >= t) return;
    cur = piece_end;
    at_start = true;
    if (++i == control_.size()) {
      i = 0;
      cycle += 1.0;
    }
  }
}

CVector ControlledEvolution::apply(double s, double t, const CVector& x0) const {
  if (x0.size() != static_cast<Eigen::Index>(model_.dim())) {
    throw InvalidArgument("state dimension does not match the model");
  }
  if (t < s) return matrix(t, s).adjoint() * x0;
  CVector x = x0;
  advance(s, t, x);
  return x;
}

CMatrix ControlledEvolution::matrix(double s, double t) const {
  if (t < s) return matrix(t, s).adjoint();
  const auto d = static_cast<Eigen::Index>(model_.dim());
  CMatrix x = CMatrix::Identity(d, d);
  advance(s, t, x);
  return x;
}

CVector propagate(const QuantumModel& model, const PiecewiseConstantControl& u, double s, double t,
                  const CVector& x0) {
  if (t < s) throw InvalidArgument("propagate needs s <= t");
  return ControlledEvolution(model, u).apply(s, t, x0);
}

CVector propagate_swapped(const QuantumModel& model, const PiecewiseConstantControl& u, double s,
                          double t, const CVector& x0) {
  if (t < s) throw InvalidArgument("propagate_swapped needs s <= t");
  return ControlledEvolution(model, u, Dynamics::Swapped).apply(s, t, x0);
}

CVector basis_state(std::size_t dim, std::size_t i) {
  if (i >= dim) throw InvalidArgument("basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

std::vector<TrajectorySample> interaction_trajectory(const QuantumModel& model,
                                                     const PiecewiseConstantControl& u, unsigned n,
                                                     const std::vector<double>& mass_grid,
                                                     const CVector& x0) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const ReparametrizedClock clk(u);
  const ControlledEvolution evo(model, scale(u, n));
  std::vector<TrajectorySample> out;
  out.reserve(mass_grid.size());
  CVector x = x0;
  double prev_time = 0.0;
  double prev_mass = 0.0;
  for (const double mass : mass_grid) {
    if (mass < prev_mass) throw InvalidArgument("mass grid must be non-negative and increasing");
    const double time = clk.time_at_mass(static_cast<double>(n) * mass);
    x = evo.apply(prev_time, time, x);
    CVector z = x;
    for (Eigen::Index r = 0; r < z.size(); ++r) {
      z(r) *= std::polar(1.0, -model.lambda(static_cast<std::size_t>(r)) * time);
    }
    out.push_back({mass, time, x, std::move(z)});
    prev_time = time;
    prev_mass = mass;
  }
  return out;
}

CMatrix m_n_matrix(const QuantumModel& model, const PiecewiseConstantControl& u, unsigned n,
                   double mass) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (mass < 0.0) throw InvalidArgument("mass must be non-negative");
  const ReparametrizedClock clk(u);
  const double scaled = static_cast<double>(n) * mass;
  const double time = clk.time_at_mass(scaled);
  const double sign = clk.sign_at_mass(scaled);
  const auto d = static_cast<Eigen::Index>(model.dim());
  CMatrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double phase = (model.lambda(static_cast<std::size_t>(k)) -
                            model.lambda(static_cast<std::size_t>(j))) *
                           time;
      out(j, k) = sign * model.coupling()(j, k) * std::polar(1.0, phase);
    }
  }
  return out;
}

Complex h_integral(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                   unsigned n, IndexPair entry, double mass) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (mass < 0.0) throw InvalidArgument("mass must be non-negative");
  if (entry.l >= model.dim() || entry.m >= model.dim()) {
    throw InvalidArgument("entry index out of range");
  }
  const CMatrix mdag = averaged_matrix(model, u, t);
  // On each piece ds = |u|/n dt and the sign restores u, so the M_n part is
  // (b_jk / n) * integral over [0, v_n(mass)] of u e^{i(lambda_k - lambda_j) tau}.
  const double time = ReparametrizedClock(u).time_at_mass(static_cast<double>(n) * mass);
  const double omega = model.lambda(entry.m) - model.lambda(entry.l);
  const Complex b = model.b(entry.l, entry.m);
  const auto li = static_cast<Eigen::Index>(entry.l);
  const auto mi = static_cast<Eigen::Index>(entry.m);
  return b / static_cast<double>(n) * partial_fourier(u, omega, time) - mass * mdag(li, mi);
}

double h_integral_bound(const QuantumModel& model, const PiecewiseConstantControl& u,
                        Transition t, unsigned n, IndexPair entry) {
  if (n == 0) throw InvalidArgument("n must be positive");
  check_period(u, model, t);
  const double mass = l1_mass(u);
  const double b = std::abs(model.b(entry.l, entry.m));
  const double nd = static_cast<double>(n);
  if (harmonic_index(model, t, entry.l, entry.m)) return 2.0 * b * mass / nd;
  const double diff = model.lambda(entry.l) - model.lambda(entry.m);
  const double gap = model.lambda(t.k) - model.lambda(t.j);
  const double f = std::abs(fourier_coefficient(u, diff));
  return b / nd * (f / std::abs(std::sin(std::numbers::pi * diff / gap)) + mass);
}

TransferResult transfer_deficit(const QuantumModel& model, const PiecewiseConstantControl& u,
                                unsigned n, Transition t, int max_harmonic, double tol) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const RwaConstants c = constants(model, u, t, max_harmonic, tol);
  TransferResult res;
  res.t_star_n = ReparametrizedClock(u).time_at_mass(static_cast<double>(n) * c.K);
  res.n_t_star = static_cast<double>(n) * c.T_star;
  if (!(std::abs(res.t_star_n - res.n_t_star) < c.T)) {
    throw NumericalError("T*_n left the window (n T* - T, n T* + T)");
  }
  const CVector x =
      ControlledEvolution(model, scale(u, n)).apply(0.0, res.t_star_n, basis_state(model.dim(), t.j));
  res.deficit = 1.0 - std::abs(x(static_cast<Eigen::Index>(t.k)));
  return res;
}

CommutatorDefect commutator_defect(const QuantumModel& model, const PiecewiseConstantControl& u,
                                   Transition t, unsigned n, std::size_t galerkin_dim, double mass,
                                   double tol) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (mass < 0.0) throw InvalidArgument("mass must be non-negative");
  const QuantumModel small = truncate(model, galerkin_dim);
  check_transition(small, t);
  const CMatrix mdag = averaged_matrix(small, u, t, tol);
  const double time = ReparametrizedClock(u).time_at_mass(static_cast<double>(n) * mass);
  const CMatrix x = ControlledEvolution(small, scale(u, n)).matrix(0.0, time);

  const auto d = static_cast<Eigen::Index>(small.dim());
  CMatrix proj = CMatrix::Zero(d, d);
  proj(static_cast<Eigen::Index>(t.j), static_cast<Eigen::Index>(t.j)) = 1.0;
  proj(static_cast<Eigen::Index>(t.k), static_cast<Eigen::Index>(t.k)) = 1.0;

  const CMatrix averaged = expm_skew_hermitian(mdag, mass);
  CMatrix with_phase = averaged;
  for (Eigen::Index r = 0; r < d; ++r) {
    with_phase.row(r) *= std::polar(1.0, small.lambda(static_cast<std::size_t>(r)) * time);
  }
  CommutatorDefect out;
  out.lhs = spectral_norm(proj * x - x * proj);
  out.e_norm = spectral_norm(x - with_phase);
  out.e_norm_no_phase = spectral_norm(x - averaged);
  out.rhs = 4.0 * out.e_norm;
  return out;
}

}  // namespace rwa
