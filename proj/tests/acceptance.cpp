// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwa/averaging.hpp"
#include "rwa/cli.hpp"
#include "rwa/clock.hpp"
#include "rwa/experiments.hpp"
#include "rwa/linalg.hpp"
#include "rwa/morse.hpp"
#include "rwa/propagate.hpp"

using namespace rwa;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

QuantumModel random_model(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  std::normal_distribution<double> g;
  RVector l(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = lam(rng);
  CMatrix m(l.size(), l.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return QuantumModel(l, 0.5 * (m - m.adjoint()));
}

PiecewiseConstantControl random_control(std::mt19937_64& rng, std::size_t pieces, bool positive,
                                        double period = 0.0) {
  std::uniform_real_distribution<double> val(positive ? 0.1 : -2.0, 2.0);
  std::uniform_real_distribution<double> dur(0.05, 1.0);
  std::vector<Piece> ps;
  double total = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    double v = val(rng);
    if (std::abs(v) < 0.05) v = v < 0 ? -0.05 : 0.05;
    ps.push_back({v, dur(rng)});
    total += ps.back().duration;
  }
  if (period > 0.0) {
    for (auto& p : ps) p.duration *= period / total;
  }
  return PiecewiseConstantControl(std::move(ps));
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome unitarity_and_composition() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(2, 8);
  double drift = 0.0;
  double comp = 0.0;
  for (int c = 0; c < 20; ++c) {
    const QuantumModel m = random_model(static_cast<std::size_t>(dim(rng)), rng);
    const auto u = random_control(rng, 3 + c % 5, false);
    const ControlledEvolution evo(m, u);
    const double horizon = 1e4 * u.period();
    drift = std::max(drift, unitarity_defect(evo.matrix(0.0, horizon)));
    const CVector x = evo.apply(0.0, horizon, basis_state(m.dim(), 0));
    drift = std::max(drift, std::abs(x.norm() - 1.0));
    const double s = 0.31 * u.period();
    const double t = 17.77 * u.period();
    const double r = 123.4 * u.period();
    comp = std::max(comp, spectral_norm(evo.matrix(t, r) * evo.matrix(s, t) - evo.matrix(s, r)));
  }
  return {drift <= 1e-10 && comp <= 1e-10,
          "max drift " + fmt("%.2e", drift) + ", composition " + fmt("%.2e", comp)};
}

Outcome swapped_identity() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> horizon(0.1, 6.0);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const QuantumModel m = random_model(static_cast<std::size_t>(dim(rng)), rng);
    const auto u = random_control(rng, 2 + c % 6, true);
    const double t = horizon(rng) * u.period();
    const CVector x0 = basis_state(m.dim(), 0);
    const CVector a = propagate(m, u, 0.0, t, x0);
    const CVector b = propagate_swapped(m, reparametrize(u), 0.0, ReparametrizedClock(u).mass_at_time(t), x0);
    worst = std::max(worst, (a - b).norm());
  }
  return {worst <= 1e-9, "max difference " + fmt("%.2e", worst)};
}

Outcome efficiencies() {
  const QuantumModel m = build_two_level(0.0, 1.0, Complex(0.0, 0.5));
  const Transition t{0, 1};
  const double constant = efficiency(PiecewiseConstantControl({{1.0, 2.0 * pi}}), m, t);
  const double cosine = efficiency(sample_cosine(1.0, 512), m, t);
  const double square = efficiency(square_wave(1.0), m, t);
  const double pulses = efficiency(pulse_train(1.0, 0.01, 1.0), m, t);
  const bool ok = constant == 0.0 && std::abs(cosine - pi / 4.0) < 1e-4 &&
                  std::abs(square - 2.0 / pi) < 1e-12 && pulses > 0.999;
  return {ok, "constant " + fmt("%.1e", constant) + ", cosine " + fmt("%.8f", cosine) + ", square " +
                  fmt("%.15f", square) + ", pulses " + fmt("%.6f", pulses)};
}

Outcome two_level_bound() {
  const QuantumModel m = build_two_level(0.0, 1.0, Complex(0.0, 0.5));
  const auto u = square_wave(1.0);
  const Transition t{0, 1};
  const auto recs = convergence_sweep(m, u, t, {10, 20, 40, 80, 160});
  const auto c = constants(m, u, t);
  bool bounded = true;
  bool window = std::abs(c.T_star - pi * pi / 2.0) < 1e-12;
  for (const auto& r : recs) {
    bounded = bounded && r.deficit <= r.bound;
    window = window && std::abs(r.t_star_n - r.n * c.T_star) < c.T;
  }
  const RateFit fit = rate_fit(recs);
  const bool slope_ok = fit.slope >= -1.3 && fit.slope <= -0.7;
  return {bounded && window && slope_ok,
          std::string("deficit <= bound: ") + (bounded ? "yes" : "no") + ", T*_n window: " +
              (window ? "yes" : "no") + ", slope " + fmt("%.3f", fit.slope) + " (window [-1.3, -0.7])"};
}

Outcome averaging_estimates() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> gap(0.3, 2.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  double worst_ratio = 0.0;
  while (checked < 200) {
    const std::size_t d = static_cast<std::size_t>(dim(rng));
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < d; ++i) gaps.push_back(gap(rng));
    if (unit(rng) < 0.3 && d >= 3) gaps[1] = 2.0 * gaps[0];  // force a resonant entry
    const QuantumModel m = build_synthetic(d, gaps, rng());
    const Transition t{0, 1};
    const double period = 2.0 * pi / gaps[0];
    const auto u = checked % 2 ? sample_cosine(gaps[0], 16 + 2 * (checked % 20))
                               : random_control(rng, 2 + checked % 5, false, period);
    const unsigned n = 1 + static_cast<unsigned>(rng() % 200);
    const IndexPair e{rng() % d, rng() % d};
    const double mass = 3.0 * l1_mass(u) * unit(rng) / n * (1 + rng() % 50);
    const double lhs = std::abs(h_integral(m, u, t, n, e, mass));
    const double rhs = h_integral_bound(m, u, t, n, e);
    worst_ratio = std::max(worst_ratio, lhs / rhs);
    ++checked;
  }
  return {worst_ratio <= 1.0 + 1e-12, "200 samples, max |h| / bound = " + fmt("%.4f", worst_ratio)};
}

QuantumModel six_level() {
  return build_synthetic(6, {1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0), 0.7}, 606);
}

Outcome commutator() {
  const QuantumModel m = six_level();
  const Transition t{0, 1};
  const auto u = sample_cosine(1.0, 128);
  const auto c = constants(m, u, t);
  double worst = -1e300;
  for (const unsigned n : {10u, 100u}) {
    for (int i = 0; i < 20; ++i) {
      const double mass = c.K * i / 19.0;
      const auto d = commutator_defect(m, u, t, n, m.dim(), mass);
      worst = std::max(worst, d.lhs - d.rhs);
    }
  }
  return {worst <= 1e-12, "max (lhs - rhs) = " + fmt("%.3e", worst)};
}

Outcome at_scale() {
  const fs::path dir = fs::temp_directory_path() / "rwa_acceptance_7";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const nlohmann::json model = {{"builder", "synthetic"},
                                {"dim", 6},
                                {"gaps", {1.0, 2.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)}},
                                {"seed", 707}};
  std::ofstream(dir / "model.json") << model.dump(2);
  std::ofstream(dir / "square.json") << nlohmann::json{{"builder", "square"}}.dump();
  const QuantumModel m = build_synthetic(6, {1.0, 2.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)}, 707);
  const Transition t{0, 1};
  const auto u = sample_cosine(1.0, 512);
  const auto rep = check_theorem_hypotheses(u, m, t);
  const auto recs = convergence_sweep(m, u, t, {10, 20, 40, 80, 160});
  std::ostringstream out, err;
  const int code = cli::run({"check", "--model", (dir / "model.json").string(), "--control",
                             (dir / "square.json").string(), "--out", dir.string()},
                            out, err);
  const bool ok = rep.verdict && !rep.resonances.empty() && recs.back().deficit < 0.02 && code == 2;
  return {ok, std::string("cosine verdict ") + (rep.verdict ? "PASS" : "FAIL") + " with " +
                  std::to_string(rep.resonances.size()) + " planted resonances, deficit(160) " +
                  fmt("%.3e", recs.back().deficit) + ", square-wave check exit " + std::to_string(code)};
}

Outcome morse() {
  const MorseSpec s;
  const MorseReport rep = morse_pipeline(s, {10, 20, 40});
  bool ok = rep.diagnostics.bound_states == 10;
  double err = 0.0;
  for (std::size_t n = 0; n <= 3; ++n) err = std::max(err, rep.diagnostics.rel_error[n]);
  ok = ok && err < 1e-3 && rep.hypotheses.nondegeneracy.nondegenerate;
  for (std::size_t i = 1; i < rep.sweep.size(); ++i) ok = ok && rep.sweep[i].deficit < rep.sweep[i - 1].deficit;
  return {ok, std::to_string(rep.diagnostics.bound_states) + " bound states, max rel error (n<=3) " +
                  fmt("%.2e", err) + ", deficits " + fmt("%.3e", rep.sweep[0].deficit) + " > " +
                  fmt("%.3e", rep.sweep[1].deficit) + " > " + fmt("%.3e", rep.sweep[2].deficit)};
}

Outcome pi_pulse() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> dim(2, 7);
  std::uniform_real_distribution<double> gap(0.2, 3.0);
  int cases = 0;
  double worst = 0.0;
  while (cases < 20) {
    const std::size_t d = static_cast<std::size_t>(dim(rng));
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < d; ++i) gaps.push_back(gap(rng));
    const QuantumModel m = build_synthetic(d, gaps, rng());
    const Transition t{0, 1};
    const auto u = sample_cosine(gaps[0], 512);
    if (!check_theorem_hypotheses(u, m, t).verdict) continue;
    const auto c = constants(m, u, t);
    const CMatrix e = expm_skew_hermitian(averaged_matrix(m, u, t), c.K);
    worst = std::max(worst, std::abs(std::abs(e(1, 0)) - 1.0));
    ++cases;
  }
  return {worst <= 1e-10, "20 cases, max ||<phi_k, e^{K M} phi_j>| - 1| = " + fmt("%.2e", worst)};
}

std::string strip_last_column(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Outcome reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "rwa_acceptance_10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const nlohmann::json cfg = {
      {"model", {{"builder", "synthetic"}, {"dim", 4}, {"gaps", {1.0, std::sqrt(2.0), std::sqrt(3.0)}}, {"seed", 10}}},
      {"control", {{"builder", "cosine"}, {"pieces", 128}}},
      {"ns", {10, 20, 40, 80}}};
  std::ofstream(dir / "config.json") << cfg.dump(2);
  std::ostringstream out, err;
  const int a = cli::run({"sweep", "--config", (dir / "config.json").string(), "--out", (dir / "a").string()}, out, err);
  const int b = cli::run({"sweep", "--config", (dir / "config.json").string(), "--out", (dir / "b").string(),
                          "--threads", "3"},
                         out, err);
  const std::string ca = strip_last_column(dir / "a" / "sweep.csv");
  const std::string cb = strip_last_column(dir / "b" / "sweep.csv");
  const bool ok = a == 0 && b == 0 && !ca.empty() && ca == cb;
  return {ok, std::string("exit codes ") + std::to_string(a) + "/" + std::to_string(b) +
                  (ca == cb ? ", CSV identical" : ", CSV differs")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "unitarity and composition", 30.0, unitarity_and_composition},
      {2, "swapped-system identity", 10.0, swapped_identity},
      {3, "efficiency values", 1.0, efficiencies},
      {4, "two-level deficit bound and rate", 60.0, two_level_bound},
      {5, "averaging-error estimates", 60.0, averaging_estimates},
      {6, "commutator bound", 60.0, commutator},
      {7, "multi-level transfer with planted resonance", 120.0, at_scale},
      {8, "Morse pipeline", 600.0, morse},
      {9, "averaged-flow pi pulse", 5.0, pi_pulse},
      {10, "reproducibility", 60.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.budget;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
