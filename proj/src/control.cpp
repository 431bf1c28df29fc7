#include "rwa/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rwa/errors.hpp"

namespace rwa {

namespace {

constexpr Complex kI{0.0, 1.0};

// Replace exact zeros with +-kZeroPerturbation, taking the sign of the
// previous nonzero piece (cyclically).
void perturb_zeros(std::vector<Piece>& pieces) {
  double last = 1.0;
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
    if (it->value != 0.0) {
      last = it->value > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (auto& p : pieces) {
    if (p.value == 0.0) {
      p.value = last * kZeroPerturbation;
    } else {
      last = p.value > 0.0 ? 1.0 : -1.0;
    }
  }
}

// Integral over [a, b] of e^{i omega tau}.
Complex exp_integral(double omega, double a, double b) {
  if (omega == 0.0) return {b - a, 0.0};
  return (std::polar(1.0, omega * b) - std::polar(1.0, omega * a)) / (kI * omega);
}

// e^{i omega T}, exactly 1 when omega T is a multiple of 2 pi up to rounding.
Complex period_phase(double omega, double period) {
  const double turns = omega * period / (2.0 * std::numbers::pi);
  const double nearest = std::round(turns);
  if (std::abs(turns - nearest) <= 1e-12 * std::max(1.0, std::abs(nearest))) return 1.0;
  return std::polar(1.0, omega * period);
}

// Integral over [0, r] of u e^{i omega tau}, r within one period.
Complex within_period(const PiecewiseConstantControl& u, double omega, double r) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u.start(i);
    if (a >= r) break;
    const double b = std::min(u.start(i + 1), r);
    if (omega != 0.0 && i + 1 == u.size() && b == u.period()) {
      acc += u.pieces()[i].value * (period_phase(omega, b) - std::polar(1.0, omega * a)) / (kI * omega);
    } else {
      acc += u.pieces()[i].value * exp_integral(omega, a, b);
    }
  }
  return acc;
}

}  // namespace

PiecewiseConstantControl::PiecewiseConstantControl(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidArgument("control needs at least one piece");
  starts_.reserve(pieces_.size() + 1);
  starts_.push_back(0.0);
  for (const auto& p : pieces_) {
    if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
      throw InvalidArgument("control piece durations must be positive and finite");
    }
    if (!std::isfinite(p.value)) throw InvalidArgument("control piece values must be finite");
    starts_.push_back(starts_.back() + p.duration);
  }
}

std::size_t PiecewiseConstantControl::piece_at(double offset) const {
  const auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, offset);
  const auto idx = static_cast<std::size_t>(std::distance(starts_.begin(), it));
  return idx == 0 ? 0 : std::min(idx - 1, pieces_.size() - 1);
}

double PiecewiseConstantControl::value_at(double t) const {
  const double period = this->period();
  double r = t - std::floor(t / period) * period;
  if (r >= period) r = 0.0;
  return pieces_[piece_at(r)].value;
}

bool PiecewiseConstantControl::has_zero_piece() const {
  return std::any_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.value == 0.0; });
}

PiecewiseConstantControl scale(const PiecewiseConstantControl& u, unsigned n) {
  if (n == 0) throw InvalidArgument("scale factor n must be positive");
  std::vector<Piece> out(u.pieces().begin(), u.pieces().end());
  for (auto& p : out) p.value /= static_cast<double>(n);
  return PiecewiseConstantControl(std::move(out));
}

PiecewiseConstantControl reparametrize(const PiecewiseConstantControl& u) {
  std::vector<Piece> out;
  out.reserve(u.size());
  for (const auto& p : u.pieces()) {
    if (p.value == 0.0) throw InvalidArgument("reparametrize needs nonzero piece values");
    out.push_back({1.0 / p.value, std::abs(p.value) * p.duration});
  }
  return PiecewiseConstantControl(std::move(out));
}

double l1_mass(const PiecewiseConstantControl& u) {
  double acc = 0.0;
  for (const auto& p : u.pieces()) acc += std::abs(p.value) * p.duration;
  return acc;
}

Complex fourier_coefficient(const PiecewiseConstantControl& u, double omega) {
  return within_period(u, omega, u.period());
}

Complex partial_fourier(const PiecewiseConstantControl& u, double omega, double t) {
  if (t < 0.0) throw InvalidArgument("partial_fourier needs t >= 0");
  const double period = u.period();
  double whole = std::floor(t / period);
  double r = t - whole * period;
  if (r >= period) {
    whole += 1.0;
    r = 0.0;
  }
  const Complex f = fourier_coefficient(u, omega);
  // Sum_{m < whole} e^{i omega m T}, then the shifted remainder.
  const Complex q = period_phase(omega, period);
  Complex geometric;
  if (std::abs(1.0 - q) < 1e-13) {
    geometric = whole;
  } else {
    geometric = (1.0 - std::polar(1.0, omega * period * whole)) / (1.0 - q);
  }
  const Complex shift = q == 1.0 ? Complex(1.0) : std::polar(1.0, omega * period * whole);
  return f * geometric + shift * within_period(u, omega, r);
}

void check_period(const PiecewiseConstantControl& u, const QuantumModel& model, Transition t) {
  check_transition(model, t);
  const double gap = std::abs(model.lambda(t.j) - model.lambda(t.k));
  if (gap == 0.0) throw InvalidArgument("transition has zero spectral gap");
  const double expected = 2.0 * std::numbers::pi / gap;
  if (std::abs(u.period() - expected) > kPeriodTol * expected) {
    std::ostringstream os;
    os.precision(17);
    os << "control period " << u.period() << " does not match 2*pi/|gap| = " << expected;
    throw InvalidArgument(os.str());
  }
}

double efficiency(const PiecewiseConstantControl& u, const QuantumModel& model, Transition t) {
  check_period(u, model, t);
  const double mass = l1_mass(u);
  if (!(mass > 0.0)) throw InvalidArgument("efficiency undefined for a zero control");
  const double omega = model.lambda(t.j) - model.lambda(t.k);
  return std::abs(fourier_coefficient(u, omega)) / mass;
}

HypothesisReport check_theorem_hypotheses(const PiecewiseConstantControl& u,
                                          const QuantumModel& model, Transition t, int max_harmonic,
                                          double tol) {
  check_period(u, model, t);
  HypothesisReport rep;
  rep.nondegeneracy = is_nondegenerate(model, t, tol);
  rep.l1 = l1_mass(u);
  const double threshold = tol * rep.l1;
  for (const auto& pair : resonant_pairs(model, t, max_harmonic, tol)) {
    const double mag =
        std::abs(fourier_coefficient(u, model.lambda(pair.l) - model.lambda(pair.m)));
    rep.resonances.push_back({pair, mag, mag <= threshold});
  }
  rep.principal_magnitude = std::abs(fourier_coefficient(u, model.lambda(t.j) - model.lambda(t.k)));
  rep.principal_pass = rep.principal_magnitude > threshold;
  for (const auto& p : u.pieces()) {
    if (!model.amplitude_set().contains(p.value)) rep.amplitude_pass = false;
  }
  rep.verdict = rep.nondegeneracy.nondegenerate && rep.principal_pass && rep.amplitude_pass &&
                std::all_of(rep.resonances.begin(), rep.resonances.end(),
                            [](const ResonanceCheck& c) { return c.pass; });
  return rep;
}

std::string HypothesisReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "non-degenerate transition: " << (nondegeneracy.nondegenerate ? "yes" : "no");
  if (!nondegeneracy.reason.empty()) os << " (" << nondegeneracy.reason << ")";
  os << '\n';
  for (const auto& p : nondegeneracy.offenders) {
    os << "  offender " << format_pair(p.l, p.m) << '\n';
  }
  os << "harmonic resonances to cancel: " << resonances.size() << '\n';
  for (const auto& r : resonances) {
    os << "  pair " << format_pair(r.pair.l, r.pair.m) << " harmonic " << r.pair.harmonic
       << " |coefficient| = " << r.magnitude << (r.pass ? " ok" : " FAIL") << '\n';
  }
  os << "principal coefficient F = " << principal_magnitude << " (I = " << l1 << ") "
     << (principal_pass ? "ok" : "FAIL") << '\n';
  if (!amplitude_pass) os << "control leaves the admissible amplitude set\n";
  os << "verdict: " << (verdict ? "PASS" : "FAIL") << '\n';
  return os.str();
}

PiecewiseConstantControl sample_cosine(double omega, std::size_t pieces_per_period) {
  if (pieces_per_period < 8 || pieces_per_period % 2 != 0) {
    throw InvalidArgument("sampled cosine needs an even piece count >= 8");
  }
  if (!(omega > 0.0)) throw InvalidArgument("cosine angular frequency must be positive");
  const double period = 2.0 * std::numbers::pi / omega;
  const double width = period / static_cast<double>(pieces_per_period);
  std::vector<Piece> pieces(pieces_per_period);
  for (std::size_t m = 0; m < pieces_per_period; ++m) {
    const double mid = (static_cast<double>(m) + 0.5) * width;
    pieces[m] = {std::cos(omega * mid), width};
  }
  perturb_zeros(pieces);
  return PiecewiseConstantControl(std::move(pieces));
}

PiecewiseConstantControl pulse_train(double omega, double width_fraction, double amplitude) {
  if (!(omega > 0.0)) throw InvalidArgument("pulse train angular frequency must be positive");
  if (!(width_fraction > 0.0 && width_fraction < 0.5)) {
    throw InvalidArgument("pulse width fraction must lie in (0, 0.5)");
  }
  if (amplitude == 0.0) throw InvalidArgument("pulse amplitude must be nonzero");
  const double period = 2.0 * std::numbers::pi / omega;
  const double half = 0.5 * width_fraction * period;
  std::vector<Piece> pieces{
      {amplitude, half},
      {0.0, 0.5 * period - 2.0 * half},
      {-amplitude, 2.0 * half},
      {0.0, 0.5 * period - 2.0 * half},
      {amplitude, half},
  };
  perturb_zeros(pieces);
  return PiecewiseConstantControl(std::move(pieces));
}

PiecewiseConstantControl square_wave(double omega, double amplitude) {
  if (!(omega > 0.0)) throw InvalidArgument("square wave angular frequency must be positive");
  if (amplitude == 0.0) throw InvalidArgument("square wave amplitude must be nonzero");
  const double half = std::numbers::pi / omega;
  return PiecewiseConstantControl({{amplitude, half}, {-amplitude, half}});
}

}  // namespace rwa
