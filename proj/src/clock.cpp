#include "rwa/clock.hpp"

#include <algorithm>
#include <cmath>

#include "rwa/errors.hpp"

namespace rwa {

namespace {

// Split x >= 0 into (whole periods, remainder in [0, p)).
std::pair<double, double> split(double x, double p) {
  double whole = std::floor(x / p);
  double r = x - whole * p;
  if (r < 0.0) r = 0.0;
  if (r >= p) {
    whole += 1.0;
    r = 0.0;
  }
  return {whole, r};
}

std::size_t segment(const std::vector<double>& breaks, double r) {
  const auto it = std::upper_bound(breaks.begin(), breaks.end() - 1, r);
  const auto idx = static_cast<std::size_t>(std::distance(breaks.begin(), it));
  return idx == 0 ? 0 : std::min(idx - 1, breaks.size() - 2);
}

}  // namespace

ReparametrizedClock::ReparametrizedClock(const PiecewiseConstantControl& u) {
  if (u.has_zero_piece()) {
    throw InvalidArgument("clock needs a control without zero pieces");
  }
  times_.push_back(0.0);
  masses_.push_back(0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Piece& p = u.pieces()[i];
    times_.push_back(u.start(i + 1));
    masses_.push_back(masses_.back() + std::abs(p.value) * p.duration);
    rates_.push_back(std::abs(p.value));
    signs_.push_back(p.value > 0.0 ? 1 : -1);
  }
}

double ReparametrizedClock::time_at_mass(double s) const {
  if (s < 0.0) throw InvalidArgument("clock argument must be non-negative");
  const auto [whole, r] = split(s, mass_per_period());
  const std::size_t i = segment(masses_, r);
  const double within = std::min(times_[i] + (r - masses_[i]) / rates_[i], times_[i + 1]);
  return whole * period() + within;
}

double ReparametrizedClock::mass_at_time(double t) const {
  if (t < 0.0) throw InvalidArgument("clock argument must be non-negative");
  const auto [whole, r] = split(t, period());
  const std::size_t i = segment(times_, r);
  const double within = std::min(masses_[i] + (r - times_[i]) * rates_[i], masses_[i + 1]);
  return whole * mass_per_period() + within;
}

int ReparametrizedClock::sign_at_mass(double s) const {
  if (s < 0.0) throw InvalidArgument("clock argument must be non-negative");
  const auto r = split(s, mass_per_period()).second;
  return signs_[segment(masses_, r)];
}

ReparametrizedClock clock(const PiecewiseConstantControl& u) { return ReparametrizedClock(u); }

double clock_eval(const ReparametrizedClock& c, double s) { return c.time_at_mass(s); }

double clock_inverse(const ReparametrizedClock& c, double t) { return c.mass_at_time(t); }

}  // namespace rwa
