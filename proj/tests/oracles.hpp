#pragma once

// Reference computations that share no code with the library: Taylor
// exponentials, RK4 integration, piecewise Simpson quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rwa/control.hpp"
#include "rwa/model.hpp"

namespace oracle {

using rwa::CMatrix;
using rwa::Complex;
using rwa::CVector;

inline CMatrix taylor_expm(const CMatrix& g) {
  const double norm = g.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const CMatrix a = g / std::pow(2.0, squarings);
  CMatrix term = CMatrix::Identity(g.rows(), g.cols());
  CMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline double power_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const CMatrix g = m.adjoint() * m;
  CVector v = CVector::Ones(g.cols());
  double lambda = 0.0;
  for (int it = 0; it < 2000; ++it) {
    CVector w = g * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    lambda = nw;
  }
  return std::sqrt(lambda);
}

// Composite Simpson on [a, b] with `panels` panels (even).
inline Complex simpson(const std::function<Complex(double)>& f, double a, double b, int panels = 400) {
  if (b <= a) return 0.0;
  const double h = (b - a) / panels;
  Complex acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// Integral over [0, t] of u(tau) e^{i omega tau}, panel by panel so each
// Simpson rule sees a smooth integrand.
inline Complex fourier_quadrature(const rwa::PiecewiseConstantControl& u, double omega, double t,
                                  int panels = 400) {
  Complex acc = 0.0;
  double start = 0.0;
  while (start < t) {
    for (const auto& p : u.pieces()) {
      const double end = std::min(start + p.duration, t);
      if (end > start) {
        acc += simpson([&](double x) { return p.value * std::polar(1.0, omega * x); }, start, end,
                       panels);
      }
      start += p.duration;
      if (start >= t) break;
    }
  }
  return acc;
}

// RK4 for x' = (A + u(t) B) x, stepping piece by piece.
inline CVector rk4_propagate(const rwa::QuantumModel& model, const rwa::PiecewiseConstantControl& u,
                             double t_end, const CVector& x0, int steps_per_piece = 400) {
  const CMatrix a = model.free_generator();
  const CMatrix& b = model.coupling();
  CVector x = x0;
  double t = 0.0;
  while (t < t_end) {
    for (const auto& p : u.pieces()) {
      const double end = std::min(t + p.duration, t_end);
      if (end > t) {
        const CMatrix g = a + p.value * b;
        const double h = (end - t) / steps_per_piece;
        for (int s = 0; s < steps_per_piece; ++s) {
          const CVector k1 = g * x;
          const CVector k2 = g * (x + 0.5 * h * k1);
          const CVector k3 = g * (x + 0.5 * h * k2);
          const CVector k4 = g * (x + h * k3);
          x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
      }
      t += p.duration;
      if (t >= t_end) break;
    }
  }
  return x;
}

inline CMatrix random_skew_hermitian(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix m(d, d);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (m - m.adjoint());
}

inline rwa::QuantumModel random_model(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  rwa::RVector l(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = lam(rng);
  return rwa::QuantumModel(l, random_skew_hermitian(d, rng));
}

inline rwa::PiecewiseConstantControl random_control(std::mt19937_64& rng, std::size_t pieces,
                                                    bool positive) {
  std::uniform_real_distribution<double> val(positive ? 0.2 : -2.0, 2.0);
  std::uniform_real_distribution<double> dur(0.05, 0.6);
  std::vector<rwa::Piece> ps;
  for (std::size_t i = 0; i < pieces; ++i) {
    double v = val(rng);
    if (std::abs(v) < 0.05) v = 0.05;
    ps.push_back({v, dur(rng)});
  }
  return rwa::PiecewiseConstantControl(std::move(ps));
}

}  // namespace oracle
