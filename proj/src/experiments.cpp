#include "rwa/experiments.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rwa/errors.hpp"
#include "rwa/linalg.hpp"

namespace rwa {

namespace {

SweepRecord sweep_point(const QuantumModel& model, const PiecewiseConstantControl& u, Transition t,
                        const RwaConstants& c, unsigned n, const SweepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.n = n;
  const TransferResult tr = transfer_deficit(model, u, n, t, options.max_harmonic, options.tol);
  rec.t_star_n = tr.t_star_n;
  rec.deficit = tr.deficit;
  rec.bound = deficit_bound(c, model, t, n);
  const CVector pred =
      predicted_state(model, u, t, n, c.K, basis_state(model.dim(), t.j), options.tol);
  rec.predicted_deficit = 1.0 - std::abs(pred(static_cast<Eigen::Index>(t.k)));
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

// Row block pi_N B (1 - pi_N).
double galerkin_tail(const QuantumModel& model, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  const auto ni = static_cast<Eigen::Index>(n);
  return spectral_norm(model.coupling().block(0, ni, ni, d - ni));
}

}  // namespace

std::vector<SweepRecord> convergence_sweep(const QuantumModel& model,
                                           const PiecewiseConstantControl& u, Transition t,
                                           const std::vector<unsigned>& ns,
                                           const SweepOptions& options) {
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw InvalidArgument("sweep ns must be strictly increasing");
  }
  for (const unsigned n : ns) {
    if (n == 0) throw InvalidArgument("sweep ns must be positive");
  }
  const RwaConstants c = constants(model, u, t, options.max_harmonic, options.tol);
  std::vector<SweepRecord> out(ns.size());
  const auto count = static_cast<long>(ns.size());
  if (options.execution == kernels::Execution::Serial) {
    for (long i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] =
          sweep_point(model, u, t, c, ns[static_cast<std::size_t>(i)], options);
    }
    return out;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_limit())
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          sweep_point(model, u, t, c, ns[static_cast<std::size_t>(i)], options);
    } catch (...) {
#pragma omp critical(rwa_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

RateFit rate_fit(const std::vector<SweepRecord>& records) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : records) {
    if (r.deficit > kDeficitFloor && r.n > 0) {
      xs.push_back(std::log(static_cast<double>(r.n)));
      ys.push_back(std::log(r.deficit));
    }
  }
  if (xs.size() < 4) throw InvalidArgument("rate fit needs at least 4 records with positive deficit");
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("rate fit needs at least two distinct n");
  RateFit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::min(1.0, (sxy * sxy) / (sxx * syy));
  return fit;
}

std::vector<GalerkinRow> galerkin_study(const QuantumModel& model, const PiecewiseConstantControl& u,
                                        Transition t, unsigned n,
                                        const std::vector<std::size_t>& dims,
                                        std::size_t envelope_samples, double tol) {
  if (envelope_samples < 2) throw InvalidArgument("need at least two envelope samples");
  const RwaConstants c = constants(model, u, t, kDefaultMaxHarmonic, tol);
  const ReparametrizedClock clk(u);
  const double t_star_n = clk.time_at_mass(static_cast<double>(n) * c.K);
  const PiecewiseConstantControl un = scale(u, n);
  const auto kj = static_cast<Eigen::Index>(t.k);

  const CVector full =
      ControlledEvolution(model, un).apply(0.0, t_star_n, basis_state(model.dim(), t.j));
  const Complex full_amp = full(kj);
  const double full_deficit = 1.0 - std::abs(full_amp);

  std::vector<GalerkinRow> rows;
  for (const std::size_t dim : dims) {
    const QuantumModel small = truncate(model, dim);
    check_transition(small, t);
    const ControlledEvolution evo(small, un);
    const CVector x = evo.apply(0.0, t_star_n, basis_state(dim, t.j));

    // sup over [0, K] of ||E_N|| on a uniform mass grid.
    const CMatrix mdag = averaged_matrix(small, u, t, tol);
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix xm = CMatrix::Identity(d, d);
    double prev = 0.0;
    double e_sup = 0.0;
    for (std::size_t i = 0; i < envelope_samples; ++i) {
      const double mass = c.K * static_cast<double>(i) / static_cast<double>(envelope_samples - 1);
      const double time = clk.time_at_mass(static_cast<double>(n) * mass);
      xm = evo.matrix(prev, time) * xm;
      prev = time;
      CMatrix approx = expm_skew_hermitian(mdag, mass);
      for (Eigen::Index r = 0; r < d; ++r) {
        approx.row(r) *= std::polar(1.0, small.lambda(static_cast<std::size_t>(r)) * time);
      }
      e_sup = std::max(e_sup, spectral_norm(xm - approx));
    }

    GalerkinRow row;
    row.galerkin_dim = dim;
    row.tail_norm = tail_coupling_norm(model, t, dim);
    row.deficit = 1.0 - std::abs(x(kj));
    row.error = std::abs(row.deficit - full_deficit);
    row.amplitude_error = std::abs(x(kj) - full_amp);
    row.envelope = c.K * row.tail_norm + 4.0 * e_sup * c.K * galerkin_tail(model, dim);
    rows.push_back(row);
  }
  return rows;
}

MorseReport morse_pipeline(const MorseSpec& spec, const std::vector<unsigned>& ns,
                           std::size_t cosine_pieces, const SweepOptions& options) {
  MorseReport rep;
  rep.spec = spec;
  MorseModel built = build_morse(spec, 0, options.execution);
  rep.diagnostics = built.diagnostics;
  const QuantumModel& model = built.model;
  rep.dim = model.dim();

  const Transition t{0, 1};
  const double omega = std::abs(model.lambda(1) - model.lambda(0));
  const PiecewiseConstantControl u = sample_cosine(omega, cosine_pieces);
  rep.hypotheses = check_theorem_hypotheses(u, model, t, options.max_harmonic, options.tol);
  if (!rep.hypotheses.verdict) throw HypothesisError(rep.hypotheses.to_text());
  rep.constants = constants(model, u, t, options.max_harmonic, options.tol);
  rep.cosine = cosine_constants(model, t, options.tol);

  // Spectral margin: lambda_l - (lambda_0 + 3/2 (lambda_1 - lambda_0)) for l >= 4.
  const double l0 = model.lambda(0);
  const double l1 = model.lambda(1);
  rep.gap_margin_claim = 5.0 * spec.alpha - 17.0;
  rep.gap_margin = std::numeric_limits<double>::infinity();
  for (std::size_t l = 4; l < model.dim(); ++l) {
    rep.gap_margin = std::min(rep.gap_margin, model.lambda(l) - (l0 + 1.5 * (l1 - l0)));
  }
  // Grid error on the bound levels is a few 1e-2 at the default resolution.
  const double slack = 1e-3 * std::abs(l0);
  rep.gap_claim_holds = rep.gap_margin_claim > 0.0 && rep.gap_margin >= rep.gap_margin_claim - slack;

  const std::size_t bound = rep.diagnostics.computed.size();
  for (std::size_t l = 0; l < bound; ++l) {
    for (std::size_t m = l + 1; m < bound; ++m) {
      const double lf = static_cast<double>(l);
      const double mf = static_cast<double>(m);
      const double formula = (mf - lf) * (2.0 * spec.alpha - 1.0 - (mf + lf));
      rep.gap_formula_error =
          std::max(rep.gap_formula_error, std::abs(model.lambda(m) - model.lambda(l) - formula));
    }
  }

  rep.sweep = convergence_sweep(model, u, t, ns, options);
  return rep;
}

void export_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << "n,T_star_n,deficit,bound,predicted_deficit,wall_time\n";
  out << std::setprecision(17);
  for (const auto& r : records) {
    out << r.n << ',' << r.t_star_n << ',' << r.deficit << ',' << r.bound << ','
        << r.predicted_deficit << ',' << r.wall_time << '\n';
  }
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

std::vector<SweepRecord> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path.string() + ": missing header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw InvalidArgument(path.string() + ": malformed row '" + line + "'");
    SweepRecord r;
    r.n = static_cast<unsigned>(std::stoul(cells[0]));
    r.t_star_n = std::stod(cells[1]);
    r.deficit = std::stod(cells[2]);
    r.bound = std::stod(cells[3]);
    r.predicted_deficit = std::stod(cells[4]);
    r.wall_time = std::stod(cells[5]);
    out.push_back(r);
  }
  return out;
}

void export_json(const nlohmann::json& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << report.dump(2) << '\n';
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

void emit_plot_script(const std::string& csv_name, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << "# gnuplot " << path.filename().string() << "\n"
      << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set key top right\n"
      << "set xlabel 'n'\n"
      << "set ylabel 'transfer deficit'\n"
      << "set terminal pngcairo size 800,600\n"
      << "set output '" << std::filesystem::path(csv_name).stem().string() << ".png'\n"
      << "plot '" << csv_name << "' using 1:3 skip 1 with linespoints title 'measured deficit', \\\n"
      << "     '" << csv_name << "' using 1:4 skip 1 with linespoints title 'bound'\n";
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

nlohmann::json to_json(const SweepRecord& r) {
  return {{"n", r.n},
          {"T_star_n", r.t_star_n},
          {"deficit", r.deficit},
          {"bound", r.bound},
          {"predicted_deficit", r.predicted_deficit},
          {"wall_time", r.wall_time}};
}

nlohmann::json to_json(const RateFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"points", f.points}};
}

nlohmann::json to_json(const RwaConstants& c) {
  nlohmann::json lambda = nlohmann::json::array();
  for (const auto& p : c.Lambda) lambda.push_back({p.l + 1, p.m + 1});
  return {{"T", c.T}, {"I", c.I},      {"F", c.F},
          {"T_star", c.T_star}, {"K", c.K}, {"C", c.C},
          {"E", c.E}, {"b_principal", c.b_principal}, {"Lambda", lambda}};
}

nlohmann::json to_json(const HypothesisReport& r) {
  nlohmann::json offenders = nlohmann::json::array();
  for (const auto& p : r.nondegeneracy.offenders) offenders.push_back({p.l + 1, p.m + 1});
  nlohmann::json resonances = nlohmann::json::array();
  for (const auto& c : r.resonances) {
    resonances.push_back({{"pair", {c.pair.l + 1, c.pair.m + 1}},
                          {"harmonic", c.pair.harmonic},
                          {"magnitude", c.magnitude},
                          {"pass", c.pass}});
  }
  return {{"nondegenerate", r.nondegeneracy.nondegenerate},
          {"nondegeneracy_reason", r.nondegeneracy.reason},
          {"offenders", offenders},
          {"resonances", resonances},
          {"principal_magnitude", r.principal_magnitude},
          {"principal_pass", r.principal_pass},
          {"I", r.l1},
          {"amplitude_pass", r.amplitude_pass},
          {"verdict", r.verdict}};
}

nlohmann::json to_json(const MorseReport& r) {
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& rec : r.sweep) sweep.push_back(to_json(rec));
  const auto& d = r.diagnostics;
  return {
      {"spec",
       {{"alpha", r.spec.alpha},
        {"x_e", r.spec.x_e},
        {"M", r.spec.cutoff},
        {"L", r.spec.box_length},
        {"grid_points", r.spec.grid_points},
        {"energy_ceiling", r.spec.energy_ceiling}}},
      {"dim", r.dim},
      {"transition", {r.transition.j, r.transition.k}},
      {"diagnostics",
       {{"grid_step", d.grid_step},
        {"bound_states", d.bound_states},
        {"continuum_states", d.continuum_states},
        {"computed", d.computed},
        {"analytic", d.analytic},
        {"abs_error", d.abs_error},
        {"rel_error", d.rel_error}}},
      {"hypotheses", to_json(r.hypotheses)},
      {"constants", to_json(r.constants)},
      {"cosine_constants",
       {{"bundle", to_json(r.cosine.bundle)}, {"stated_T_star", r.cosine.stated_T_star}}},
      {"gap_margin", r.gap_margin},
      {"gap_margin_claim", r.gap_margin_claim},
      {"gap_claim_holds", r.gap_claim_holds},
      {"gap_formula_error", r.gap_formula_error},
      {"sweep", sweep}};
}

}  // namespace rwa
