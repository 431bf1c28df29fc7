#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwa/averaging.hpp"
#include "rwa/kernels.hpp"
#include "rwa/morse.hpp"
#include "rwa/propagate.hpp"

namespace rwa {

/// One point of a convergence sweep.
struct SweepRecord {
  unsigned n = 0;
  double t_star_n = 0.0;
  double deficit = 0.0;
  double bound = 0.0;
  double predicted_deficit = 0.0;
  double wall_time = 0.0;  // seconds; the only non-deterministic field
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

struct SweepOptions {
  int max_harmonic = kDefaultMaxHarmonic;
  double tol = kDefaultDegeneracyTol;
  kernels::Execution execution = kernels::Execution::Parallel;
};

/// Deficits below this are treated as solver noise and excluded from fits.
inline constexpr double kDeficitFloor = 1e-12;

/// One record per n, in the order given. Throws HypothesisError (with the
/// checker report) when the hypotheses fail. Records do not depend on the
/// execution mode except for wall_time.
std::vector<SweepRecord> convergence_sweep(const QuantumModel& model,
                                           const PiecewiseConstantControl& u, Transition t,
                                           const std::vector<unsigned>& ns,
                                           const SweepOptions& options = {});

/// Least squares of log(deficit) against log(n) over records with deficit
/// above kDeficitFloor. Needs at least four such records.
RateFit rate_fit(const std::vector<SweepRecord>& records);

struct GalerkinRow {
  std::size_t galerkin_dim = 0;
  double tail_norm = 0.0;     // ||pi_jk B (1 - pi_N)||
  double deficit = 0.0;       // on the truncated model at T*_n
  double error = 0.0;         // |deficit_N - deficit_full|
  double amplitude_error = 0.0;  // |<phi_k, Y(T*_n) phi_j> - <phi_k, X_N(T*_n) phi_j>|
  double envelope = 0.0;      // K tail_norm + 4 sup||E_N|| K ||pi_N B (1 - pi_N)||
};

/// Compares Galerkin truncations against the full model at T*_n, with T*_n
/// taken from the full model's constants.
std::vector<GalerkinRow> galerkin_study(const QuantumModel& model, const PiecewiseConstantControl& u,
                                        Transition t, unsigned n,
                                        const std::vector<std::size_t>& dims,
                                        std::size_t envelope_samples = 64,
                                        double tol = kDefaultDegeneracyTol);

struct MorseReport {
  MorseSpec spec;
  MorseDiagnostics diagnostics;
  std::size_t dim = 0;
  Transition transition{0, 1};
  HypothesisReport hypotheses;
  RwaConstants constants;
  CosineConstants cosine;
  std::vector<SweepRecord> sweep;
  double gap_margin = 0.0;  // min over l >= 4 of lambda_l - lambda_0 - 3/2 (lambda_1 - lambda_0)
  double gap_margin_claim = 0.0;  // 5 alpha - 17
  bool gap_claim_holds = false;
  double gap_formula_error = 0.0;  // max over bound pairs of |(lambda_m - lambda_l) - (m-l)(2 alpha - 1 - (m+l))|
};

/// Builds the grid model, checks the hypotheses for levels (0,1) under a
/// sampled cosine at the driven gap, sweeps n, and checks the spectral-gap margin.
MorseReport morse_pipeline(const MorseSpec& spec, const std::vector<unsigned>& ns,
                           std::size_t cosine_pieces = 512, const SweepOptions& options = {});

void export_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path);
std::vector<SweepRecord> parse_csv(const std::filesystem::path& path);
void export_json(const nlohmann::json& report, const std::filesystem::path& path);
/// Gnuplot program drawing deficit and bound against n on log-log axes from
/// the CSV file named `csv_name`, resolved relative to the script's directory.
void emit_plot_script(const std::string& csv_name, const std::filesystem::path& path);

nlohmann::json to_json(const SweepRecord& r);
nlohmann::json to_json(const RateFit& f);
nlohmann::json to_json(const RwaConstants& c);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const MorseReport& r);

}  // namespace rwa
