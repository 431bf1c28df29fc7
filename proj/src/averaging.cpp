#include "rwa/averaging.hpp"

#include <cmath>
#include <numbers>

#include "rwa/clock.hpp"
#include "rwa/errors.hpp"
#include "rwa/linalg.hpp"
#include "rwa/propagate.hpp"

namespace rwa {

namespace {

bool touches(const IndexPair& p, Transition t) {
  return p.l == t.j || p.l == t.k || p.m == t.j || p.m == t.k;
}

PiecewiseConstantControl magnitude_of(const PiecewiseConstantControl& u) {
  std::vector<Piece> pieces(u.pieces().begin(), u.pieces().end());
  for (auto& p : pieces) p.value = std::abs(p.value);
  return PiecewiseConstantControl(std::move(pieces));
}

}  // namespace

CMatrix averaged_matrix(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                        double tol, AveragingForm form) {
  check_period(u, model, t);
  const double mass = l1_mass(u);
  if (!(mass > 0.0)) throw InvalidArgument("averaged matrix undefined for a zero control");
  const PiecewiseConstantControl weight = form == AveragingForm::Signed ? u : magnitude_of(u);
  const auto d = static_cast<Eigen::Index>(model.dim());
  CMatrix out = CMatrix::Zero(d, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index m = 0; m < d; ++m) {
      const auto li = static_cast<std::size_t>(l);
      const auto mi = static_cast<std::size_t>(m);
      if (model.b(li, mi) == Complex(0.0)) continue;
      if (!harmonic_index(model, t, li, mi, tol)) continue;
      const double omega = model.lambda(mi) - model.lambda(li);
      out(l, m) = model.b(li, mi) / mass * fourier_coefficient(weight, omega);
    }
  }
  return out;
}

RwaConstants constants(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                       int max_harmonic, double tol) {
  const HypothesisReport rep = check_theorem_hypotheses(u, model, t, max_harmonic, tol);
  if (!rep.verdict) throw HypothesisError(rep.to_text());
  RwaConstants c;
  c.T = u.period();
  c.I = rep.l1;
  c.F = rep.principal_magnitude;
  c.E = c.F / c.I;
  c.b_principal = std::abs(model.b(t.j, t.k));
  c.T_star = std::numbers::pi * c.T / (2.0 * c.b_principal * c.F);
  c.K = c.I * c.T_star / c.T;
  const double gap = std::abs(model.lambda(t.j) - model.lambda(t.k));
  for (std::size_t l = 0; l < model.dim(); ++l) {
    for (std::size_t m = l + 1; m < model.dim(); ++m) {
      const IndexPair p{l, m};
      if (!touches(p, t) || std::abs(model.b(l, m)) <= tol) continue;
      if (harmonic_index(model, t, l, m, tol)) continue;
      c.Lambda.push_back(p);
      const double g = std::abs(model.lambda(l) - model.lambda(m));
      const double ratio = std::abs(fourier_coefficient(u, model.lambda(l) - model.lambda(m))) /
                           std::abs(std::sin(std::numbers::pi * g / gap));
      c.C = std::max(c.C, ratio);
    }
  }
  return c;
}

double deficit_bound(const RwaConstants& c, const QuantumModel& model, Transition t, unsigned n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const double b_norm = spectral_norm(model.coupling());
  return c.I * (1.0 + 2.0 * c.K * b_norm) * (1.0 + c.C) * row_block_norm(model, t) /
         static_cast<double>(n);
}

double propagator_bound(const RwaConstants& c, const QuantumModel& model, unsigned n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const double b_norm = spectral_norm(model.coupling());
  return c.I * (c.C + 1.0) * b_norm * (1.0 + 2.0 * c.K * b_norm) / static_cast<double>(n);
}

double measured_propagator_deviation(const QuantumModel& model, const PiecewiseConstantControl& u,
                                     Transition t, unsigned n, std::size_t samples, double tol) {
  if (samples < 2) throw InvalidArgument("need at least two mass samples");
  const RwaConstants c = constants(model, u, t, kDefaultMaxHarmonic, tol);
  const CMatrix mdag = averaged_matrix(model, u, t, tol);
  const ReparametrizedClock clk(u);
  const ControlledEvolution evo(model, scale(u, n));
  const auto d = static_cast<Eigen::Index>(model.dim());
  CMatrix x = CMatrix::Identity(d, d);
  double prev_time = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double mass = c.K * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double time = clk.time_at_mass(static_cast<double>(n) * mass);
    x = evo.matrix(prev_time, time) * x;
    prev_time = time;
    CMatrix approx = expm_skew_hermitian(mdag, mass);
    for (Eigen::Index r = 0; r < d; ++r) {
      approx.row(r) *= std::polar(1.0, model.lambda(static_cast<std::size_t>(r)) * time);
    }
    worst = std::max(worst, spectral_norm(x - approx));
  }
  return worst;
}

CosineConstants cosine_constants(const QuantumModel& model, Transition t, double tol) {
  const NondegeneracyResult nd = is_nondegenerate(model, t, tol);
  if (!nd.nondegenerate) {
    throw HypothesisError("transition " + format_pair(t.j, t.k) + " is degenerate: " + nd.reason);
  }
  const double gap = std::abs(model.lambda(t.j) - model.lambda(t.k));
  CosineConstants out;
  RwaConstants& c = out.bundle;
  c.T = 2.0 * std::numbers::pi / gap;
  c.I = 4.0 / gap;
  c.F = c.T / 2.0;
  c.E = c.F / c.I;
  c.b_principal = std::abs(model.b(t.j, t.k));
  c.T_star = std::numbers::pi * c.T / (2.0 * c.b_principal * c.F);
  c.K = 2.0 / c.b_principal;
  for (std::size_t l = 0; l < model.dim(); ++l) {
    for (std::size_t m = l + 1; m < model.dim(); ++m) {
      const IndexPair p{l, m};
      if (!touches(p, t) || std::abs(model.b(l, m)) <= tol) continue;
      const double g = std::abs(model.lambda(l) - model.lambda(m));
      if (g > 1.5 * gap || harmonic_index(model, t, l, m, tol)) continue;
      c.Lambda.push_back(p);
      c.C = std::max(c.C, 1.0 / std::abs(std::sin(std::numbers::pi * g / gap)));
    }
  }
  out.stated_T_star = std::numbers::pi / 2.0;
  return out;
}

double cosine_resonance_ratio(double omega, double period) {
  const double wt = omega * period;
  return 2.0 * std::abs(omega) * period * period /
         std::abs(wt * wt - 4.0 * std::numbers::pi * std::numbers::pi);
}

CVector predicted_state(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                        unsigned n, double mass, const CVector& x0, double tol) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (mass < 0.0) throw InvalidArgument("mass must be non-negative");
  const CMatrix mdag = averaged_matrix(model, u, t, tol);
  const double time = ReparametrizedClock(u).time_at_mass(static_cast<double>(n) * mass);
  CVector z = expm_skew_hermitian(mdag, mass) * x0;
  for (Eigen::Index r = 0; r < z.size(); ++r) {
    z(r) *= std::polar(1.0, model.lambda(static_cast<std::size_t>(r)) * time);
  }
  return z;
}

}  // namespace rwa
