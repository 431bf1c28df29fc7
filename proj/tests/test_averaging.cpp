#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rwa/averaging.hpp"
#include "rwa/errors.hpp"
#include "rwa/linalg.hpp"
#include "rwa/propagate.hpp"

using namespace rwa;
using std::numbers::pi;

TEST_CASE("averaged matrix entries") {
  const QuantumModel m = build_synthetic(4, {1.0, 2.0, std::sqrt(2.0)}, 3);
  const Transition t{0, 1};
  const auto u = sample_cosine(1.0, 32);
  const CMatrix mdag = averaged_matrix(m, u, t);
  const double i = l1_mass(u);
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double gap = m.lambda(k) - m.lambda(l);
      const bool resonant = std::abs(gap - std::round(gap)) < 1e-9;
      const Complex expected =
          resonant ? m.b(l, k) / i * oracle::fourier_quadrature(u, gap, u.period()) : Complex(0.0);
      CHECK(std::abs(mdag(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) - expected) < 1e-9);
    }
  }
  CHECK((mdag + mdag.adjoint()).norm() < 1e-12);
}

TEST_CASE("unsigned averaging agrees for non-negative controls") {
  const QuantumModel m = build_two_level(0.0, 1.0, Complex(0.0, 0.5));
  const PiecewiseConstantControl u({{2.0, pi / 2}, {0.5, 3.0 * pi / 2}});
  const Transition t{0, 1};
  CHECK((averaged_matrix(m, u, t) - averaged_matrix(m, u, t, kDefaultDegeneracyTol, AveragingForm::Unsigned))
            .norm() < 1e-15);
  const auto sq = square_wave(1.0);
  CHECK((averaged_matrix(m, sq, t) - averaged_matrix(m, sq, t, kDefaultDegeneracyTol, AveragingForm::Unsigned))
            .norm() > 0.1);
}

TEST_CASE("two-level constants for the square wave") {
  const QuantumModel m = build_two_level(0.0, 1.0, Complex(0.0, 0.5));
  const auto c = constants(m, square_wave(1.0), {0, 1});
  CHECK(c.T == doctest::Approx(2.0 * pi));
  CHECK(c.I == doctest::Approx(2.0 * pi));
  CHECK(c.F == doctest::Approx(4.0));
  CHECK(c.E == doctest::Approx(2.0 / pi));
  CHECK(c.T_star == doctest::Approx(pi * pi / 2.0));
  CHECK(c.K == doctest::Approx(pi / (2.0 * 0.5 * c.E)));
  CHECK(c.C == 0.0);
  CHECK(c.Lambda.empty());
  const double expected = c.I * (1.0 + 2.0 * c.K * 0.5) * 0.5 / 10.0;
  CHECK(deficit_bound(c, m, {0, 1}, 10) == doctest::Approx(expected));
  CHECK(propagator_bound(c, m, 10) == doctest::Approx(c.I * 0.5 * (1.0 + 2.0 * c.K * 0.5) / 10.0));
  CHECK_THROWS_AS(deficit_bound(c, m, {0, 1}, 0), InvalidArgument);
}

TEST_CASE("Lambda and C on a multi-level model") {
  const QuantumModel m = build_synthetic(4, {1.0, std::sqrt(2.0), 2.0 - std::sqrt(2.0)}, 5);
  // lambda = 0, 1, 1 + sqrt2, 3: pairs (1,4) and (2,4) sit on harmonics
  const auto u = sample_cosine(1.0, 64);
  const Transition t{0, 1};
  const auto c = constants(m, u, t);
  double brute = 0.0;
  std::size_t count = 0;
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t k = l + 1; k < 4; ++k) {
      if (l > 1 && k > 1) continue;
      const double g = std::abs(m.lambda(k) - m.lambda(l));
      if (std::abs(g - std::round(g)) < 1e-9) continue;
      ++count;
      brute = std::max(brute, std::abs(oracle::fourier_quadrature(u, m.lambda(l) - m.lambda(k), u.period())) /
                                  std::abs(std::sin(pi * g)));
    }
  }
  CHECK(c.Lambda.size() == count);
  CHECK(c.C == doctest::Approx(brute).epsilon(1e-8));
}

TEST_CASE("averaged flow transfers the driven pair") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> gap(0.3, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const QuantumModel m = build_synthetic(4, {1.0, gap(rng), gap(rng)}, 100 + trial);
    const Transition t{0, 1};
    const auto u = sample_cosine(1.0, 64);
    if (!check_theorem_hypotheses(u, m, t).verdict) continue;
    const auto c = constants(m, u, t);
    const CMatrix e = expm_skew_hermitian(averaged_matrix(m, u, t), c.K);
    CHECK(std::abs(std::abs(e(1, 0)) - 1.0) < 1e-10);
  }
}

TEST_CASE("propagator deviation stays under its bound") {
  const QuantumModel m = build_synthetic(4, {1.0, std::sqrt(2.0), std::sqrt(3.0)}, 8);
  const auto u = sample_cosine(1.0, 64);
  const Transition t{0, 1};
  const auto c = constants(m, u, t);
  for (const unsigned n : {5u, 20u}) {
    CHECK(measured_propagator_deviation(m, u, t, n, 40) <= propagator_bound(c, m, n));
  }
}

TEST_CASE("cosine constants") {
  const QuantumModel m = build_synthetic(4, {2.0, std::sqrt(2.0), 2.5}, 4);
  const Transition t{0, 1};
  const auto cc = cosine_constants(m, t);
  const double b = std::abs(m.b(0, 1));
  CHECK(cc.bundle.I == doctest::Approx(2.0));
  CHECK(cc.bundle.K == doctest::Approx(2.0 / b));
  CHECK(cc.bundle.T_star == doctest::Approx(pi / b));
  CHECK(cc.stated_T_star == doctest::Approx(pi / 2.0));
  for (const auto& p : cc.bundle.Lambda) {
    const double g = std::abs(m.lambda(p.l) - m.lambda(p.m));
    CHECK(g <= 1.5 * 2.0);
  }
  CHECK_THROWS_AS(cosine_constants(build_synthetic(3, {1.0, 1.0}, 2), t), HypothesisError);
}

TEST_CASE("cosine resonance ratio against quadrature") {
  const double period = 2.0 * pi;
  for (const double omega : {0.3, 0.7, 1.3, 1.45}) {
    const Complex integral = oracle::simpson(
        [&](double x) { return std::polar(1.0, omega * x) * std::cos(2.0 * pi * x / period); }, 0.0,
        period, 4000);
    const double ratio = std::abs(integral / std::sin(omega * period / 2.0));
    CHECK(cosine_resonance_ratio(omega, period) == doctest::Approx(ratio).epsilon(1e-9));
  }
}

TEST_CASE("predicted state") {
  const QuantumModel m = build_two_level(0.0, 1.0, Complex(0.0, 0.5));
  const auto u = square_wave(1.0);
  const auto c = constants(m, u, {0, 1});
  const CVector z = predicted_state(m, u, {0, 1}, 10, c.K, basis_state(2, 0));
  CHECK(std::abs(std::abs(z(1)) - 1.0) < 1e-12);
  CHECK(std::abs(z.norm() - 1.0) < 1e-12);
}
