#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwa/errors.hpp"
#include "rwa/experiments.hpp"

using namespace rwa;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rwa_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("two-level square-wave sweep") {
  const QuantumModel m = build_two_level(0.0, 1.0, Complex(0.0, 0.5));
  const auto u = square_wave(1.0);
  const auto recs = convergence_sweep(m, u, {0, 1}, {10, 20, 40, 80, 160});
  REQUIRE(recs.size() == 5);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].deficit <= recs[i].bound);
    CHECK(recs[i].predicted_deficit < 1e-12);
    if (i > 0) CHECK(recs[i].deficit < recs[i - 1].deficit);
  }
  // transverse corrections are unitary, so the deficit falls like 1/n^2
  const RateFit fit = rate_fit(recs);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(fit.r_squared > 0.9);
  CHECK(fit.r_squared <= 1.0);

  CHECK_THROWS_AS(convergence_sweep(m, u, {0, 1}, {20, 10}), InvalidArgument);
  CHECK_THROWS_AS(convergence_sweep(build_synthetic(3, {1.0, 2.0}, 1), u, {0, 1}, {10}), HypothesisError);
}

TEST_CASE("serial and parallel sweeps agree") {
  kernels::set_thread_limit(4);
  const QuantumModel m = build_synthetic(4, {1.0, std::sqrt(2.0), std::sqrt(3.0)}, 3);
  const auto u = sample_cosine(1.0, 64);
  SweepOptions serial;
  serial.execution = kernels::Execution::Serial;
  const auto a = convergence_sweep(m, u, {0, 1}, {5, 10, 20, 40}, serial);
  const auto b = convergence_sweep(m, u, {0, 1}, {5, 10, 20, 40});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].t_star_n == b[i].t_star_n);
    CHECK(a[i].deficit == b[i].deficit);
    CHECK(a[i].bound == b[i].bound);
    CHECK(a[i].predicted_deficit == b[i].predicted_deficit);
  }
}

TEST_CASE("rate fit") {
  std::vector<SweepRecord> recs;
  for (const unsigned n : {10u, 20u, 40u, 80u}) recs.push_back({n, 0.0, 3.0 / n, 0.0, 0.0, 0.0});
  const RateFit f = rate_fit(recs);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.points == 4);

  for (auto& r : recs) r.deficit = 0.25;
  CHECK(rate_fit(recs).slope == doctest::Approx(0.0));

  recs[0].deficit = 0.0;
  CHECK_THROWS_AS(rate_fit(recs), InvalidArgument);
  recs.push_back({160, 0.0, 0.25, 0.0, 0.0, 0.0});
  CHECK(rate_fit(recs).points == 4);
}

TEST_CASE("csv, json and plot script") {
  const fs::path dir = scratch("export");
  export_csv({}, dir / "empty.csv");
  CHECK(slurp(dir / "empty.csv") == "n,T_star_n,deficit,bound,predicted_deficit,wall_time\n");
  CHECK(parse_csv(dir / "empty.csv").empty());

  const std::vector<SweepRecord> recs{{10, 49.348022005446794, 7.9718321132704606e-4, 1.86, 1e-17, 0.5},
                                      {20, 1.0 / 3.0, 2.0 / 7.0, 0.1, 0.0, 0.25}};
  export_csv(recs, dir / "s.csv");
  const auto back = parse_csv(dir / "s.csv");
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].n == recs[i].n);
    CHECK(std::abs(back[i].t_star_n - recs[i].t_star_n) <= 1e-15 * std::abs(recs[i].t_star_n));
    CHECK(std::abs(back[i].deficit - recs[i].deficit) <= 1e-15 * std::abs(recs[i].deficit));
    CHECK(back[i].bound == recs[i].bound);
    CHECK(back[i].predicted_deficit == recs[i].predicted_deficit);
  }

  export_json(to_json(recs[0]), dir / "r.json");
  const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
  CHECK(j.at("n") == 10);
  CHECK(j.at("deficit").get<double>() == recs[0].deficit);

  emit_plot_script("s.csv", dir / "plot.gp");
  const std::string gp = slurp(dir / "plot.gp");
  CHECK(gp.find("'s.csv'") != std::string::npos);
  CHECK(gp.find("logscale") != std::string::npos);
  CHECK(gp.find(dir.string()) == std::string::npos);

  CHECK_THROWS_AS(export_csv(recs, dir / "missing" / "x.csv"), InvalidArgument);
  CHECK_THROWS_AS(parse_csv(dir / "nope.csv"), InvalidArgument);
}

TEST_CASE("galerkin study") {
  const QuantumModel m = build_synthetic(6, {1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0), 0.7}, 21);
  const auto u = sample_cosine(1.0, 64);
  const auto rows = galerkin_study(m, u, {0, 1}, 20, {2, 3, 4, 5, 6}, 32);
  REQUIRE(rows.size() == 5);
  CHECK(rows.back().error == 0.0);
  CHECK(rows.back().tail_norm == 0.0);
  for (const auto& r : rows) {
    CHECK(r.error <= r.amplitude_error + 1e-15);
    CHECK(r.amplitude_error <= r.envelope + 1e-12);
  }
}

TEST_CASE("morse pipeline") {
  MorseSpec s;
  const MorseReport rep = morse_pipeline(s, {10, 20, 40});
  CHECK(rep.diagnostics.bound_states == 10);
  CHECK(rep.hypotheses.verdict);
  CHECK(rep.gap_claim_holds);
  CHECK(rep.gap_margin == doctest::Approx(5.0 * s.alpha - 17.0).epsilon(1e-2));
  CHECK(rep.gap_formula_error < 0.1);
  REQUIRE(rep.sweep.size() == 3);
  CHECK(rep.sweep[1].deficit < rep.sweep[0].deficit);
  CHECK(rep.sweep[2].deficit < rep.sweep[1].deficit);
  for (const auto& r : rep.sweep) CHECK(r.deficit <= r.bound);
  const auto j = to_json(rep);
  CHECK(j.at("diagnostics").at("bound_states") == 10);
  CHECK(j.at("sweep").size() == 3);
}
