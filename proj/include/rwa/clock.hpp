#pragma once

#include <vector>

#include "rwa/control.hpp"

namespace rwa {

/// The accumulated-L1-mass clock of a control and its reciprocal v.
/// mass_at_time(t) = integral over [0, t] of |u|, and time_at_mass inverts it.
/// Both maps are piecewise linear with breakpoints at the piece boundaries and
/// extend periodically: v(s + I) = v(s) + T.
class ReparametrizedClock {
 public:
  /// Every piece must be nonzero so that the clock is strictly increasing.
  explicit ReparametrizedClock(const PiecewiseConstantControl& u);

  double period() const { return times_.back(); }
  double mass_per_period() const { return masses_.back(); }

  /// v(s), s >= 0.
  double time_at_mass(double s) const;
  /// integral over [0, t] of |u|, t >= 0.
  double mass_at_time(double t) const;
  /// sg(u(v(s))): sign of the control at the instant the clock reads s.
  int sign_at_mass(double s) const;

  const std::vector<double>& time_breakpoints() const { return times_; }
  const std::vector<double>& mass_breakpoints() const { return masses_; }
  const std::vector<int>& signs() const { return signs_; }

 private:
  std::vector<double> times_;   // piece starts within one period, plus T
  std::vector<double> masses_;  // accumulated |u| at those starts, plus I
  std::vector<double> rates_;   // |u_j|
  std::vector<int> signs_;
};

ReparametrizedClock clock(const PiecewiseConstantControl& u);
/// v(s)
double clock_eval(const ReparametrizedClock& c, double s);
/// integral over [0, t] of |u|
double clock_inverse(const ReparametrizedClock& c, double t);

}  // namespace rwa
