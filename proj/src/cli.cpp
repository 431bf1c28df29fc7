#include "rwa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rwa/averaging.hpp"
#include "rwa/clock.hpp"
#include "rwa/errors.hpp"
#include "rwa/experiments.hpp"
#include "rwa/io.hpp"
#include "rwa/kernels.hpp"
#include "rwa/propagate.hpp"

namespace rwa::cli {

namespace {

using nlohmann::json;

const std::vector<unsigned> kDefaultNs{10, 20, 40, 80, 160};
const std::vector<unsigned> kDefaultMorseNs{10, 20, 40};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

unsigned long parse_index(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("bad ") + what + " '" + s + "'");
  }
  if (used != s.size() || s.empty() || s[0] == '-') {
    throw InvalidArgument(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

Transition parse_transition(const std::string& s) {
  const auto parts = split(s);
  if (parts.size() != 2) throw InvalidArgument("transition must be j,k");
  const auto j = parse_index(parts[0], "transition index");
  const auto k = parse_index(parts[1], "transition index");
  if (j == 0 || k == 0) throw InvalidArgument("transition indices are 1-based");
  return {j - 1, k - 1};
}

std::vector<unsigned> parse_ns(const std::string& s) {
  std::vector<unsigned> out;
  for (const auto& p : split(s)) out.push_back(static_cast<unsigned>(parse_index(p, "n")));
  return out;
}

std::vector<std::size_t> parse_components(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& p : split(s)) {
    const auto c = parse_index(p, "component");
    if (c == 0) throw InvalidArgument("components are 1-based");
    out.push_back(c - 1);
  }
  return out;
}

Transition transition_from_json(const json& j) {
  const auto v = j.get<std::vector<std::size_t>>();
  if (v.size() != 2 || v[0] == 0 || v[1] == 0) {
    throw InvalidArgument("config transition must be [j, k], 1-based");
  }
  return {v[0] - 1, v[1] - 1};
}

struct Loaded {
  QuantumModel model;
  PiecewiseConstantControl control;
};

Loaded load(const RunConfig& c) {
  QuantumModel model = model_from_json(resolve_source(c.model, c.base_dir));
  check_transition(model, c.transition);
  PiecewiseConstantControl u = control_from_json(resolve_source(c.control, c.base_dir), model, c.transition);
  return {std::move(model), std::move(u)};
}

void apply_threads(const RunConfig& c) {
  if (c.threads < 0) throw InvalidArgument("--threads must be non-negative");
  kernels::set_thread_limit(c.threads);
}

void prepare_out(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create " + dir.string() + ": " + ec.message());
}

void print_records(std::ostream& out, const std::vector<SweepRecord>& recs) {
  out << std::setw(6) << "n" << std::setw(14) << "T*_n" << std::setw(14) << "deficit"
      << std::setw(14) << "bound" << std::setw(14) << "predicted" << '\n';
  for (const auto& r : recs) {
    out << std::setw(6) << r.n << std::setw(14) << std::setprecision(6) << r.t_star_n
        << std::setw(14) << r.deficit << std::setw(14) << r.bound << std::setw(14)
        << r.predicted_deficit << '\n';
  }
}

struct SweepSummary {
  bool bounds_ok = true;
  bool propagator_ok = true;
  std::optional<RateFit> fit;
};

SweepSummary summarize(const std::vector<SweepRecord>& recs, const RwaConstants& c,
                       const QuantumModel& model) {
  SweepSummary s;
  for (const auto& r : recs) {
    if (!(r.deficit <= r.bound)) s.bounds_ok = false;
    if (!(std::abs(r.deficit - r.predicted_deficit) <= propagator_bound(c, model, r.n))) {
      s.propagator_ok = false;
    }
  }
  std::size_t usable = 0;
  for (const auto& r : recs) usable += r.deficit > kDeficitFloor ? 1 : 0;
  if (usable >= 4) s.fit = rate_fit(recs);
  return s;
}

void print_summary(std::ostream& out, const SweepSummary& s) {
  if (s.fit) {
    out << "slope " << std::setprecision(4) << s.fit->slope << " (r^2 " << s.fit->r_squared
        << ", " << s.fit->points << " points)\n";
  } else {
    out << "slope n/a (fewer than 4 positive deficits)\n";
  }
  out << (s.bounds_ok ? "BOUNDS OK" : "BOUNDS VIOLATED") << '\n';
  if (!s.propagator_ok) out << "warning: |deficit - predicted| exceeds the propagator bound\n";
}

json summary_json(const SweepSummary& s) {
  json j = {{"bounds_ok", s.bounds_ok}, {"propagator_bound_ok", s.propagator_ok}};
  j["rate_fit"] = s.fit ? to_json(*s.fit) : json(nullptr);
  return j;
}

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.max_harmonic = c.max_harmonic;
  o.tol = c.tol;
  o.execution = kernels::Execution::Parallel;
  return o;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw InvalidArgument(path.string() + ": config must be a JSON object");
  RunConfig c;
  c.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  try {
    if (j.contains("model")) c.model = j.at("model");
    if (j.contains("control")) c.control = j.at("control");
    if (j.contains("transition")) c.transition = transition_from_json(j.at("transition"));
    if (j.contains("ns")) c.ns = j.at("ns").get<std::vector<unsigned>>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("max_harmonic")) c.max_harmonic = j.at("max_harmonic").get<int>();
    if (j.contains("out")) {
      c.out_dir = j.at("out").get<std::string>();
      if (c.out_dir.is_relative()) c.out_dir = c.base_dir / c.out_dir;
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("n")) c.n = j.at("n").get<unsigned>();
    if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
    if (j.contains("components")) {
      for (const auto v : j.at("components").get<std::vector<std::size_t>>()) {
        if (v == 0) throw InvalidArgument("components are 1-based");
        c.components.push_back(v - 1);
      }
    }
    if (j.contains("morse")) c.morse = j.at("morse");
    if (j.contains("cosine_pieces")) c.cosine_pieces = j.at("cosine_pieces").get<std::size_t>();
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return c;
}

int cmd_check(const RunConfig& config, std::ostream& out) {
  const Loaded in = load(config);
  const HypothesisReport rep =
      check_theorem_hypotheses(in.control, in.model, config.transition, config.max_harmonic, config.tol);
  out << "transition " << format_pair(config.transition.j, config.transition.k) << ", dimension "
      << in.model.dim() << ", " << in.control.size() << " pieces\n"
      << rep.to_text();
  if (rep.verdict) {
    const RwaConstants c = constants(in.model, in.control, config.transition, config.max_harmonic, config.tol);
    out << std::setprecision(8) << "efficiency E = " << c.E << ", T* = " << c.T_star
        << ", K = " << c.K << ", C = " << c.C << '\n';
  }
  prepare_out(config.out_dir);
  json j = to_json(rep);
  j["transition"] = {config.transition.j + 1, config.transition.k + 1};
  export_json(j, config.out_dir / "check.json");
  return rep.verdict ? kOk : kHypothesis;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  apply_threads(config);
  const Loaded in = load(config);
  const Transition t = config.transition;
  if (config.n == 0) throw InvalidArgument("--n must be positive");
  if (config.samples == 0) throw InvalidArgument("--samples must be positive");
  double t_end = 0.0;
  if (config.t_end) {
    t_end = *config.t_end;
    if (!(t_end >= 0.0)) throw InvalidArgument("--t-end must be non-negative");
  } else {
    const RwaConstants c = constants(in.model, in.control, t, config.max_harmonic, config.tol);
    t_end = ReparametrizedClock(in.control).time_at_mass(static_cast<double>(config.n) * c.K);
  }
  std::vector<std::size_t> comps = config.components;
  if (comps.empty()) comps = {t.j, t.k};
  for (const auto c : comps) {
    if (c >= in.model.dim()) throw InvalidArgument("component " + std::to_string(c + 1) + " out of range");
  }

  const ControlledEvolution evo(in.model, scale(in.control, config.n));
  const std::size_t rows = t_end == 0.0 ? 1 : std::max<std::size_t>(config.samples, 2);
  prepare_out(config.out_dir);
  const auto path = config.out_dir / "simulate.csv";
  std::ofstream csv(path);
  if (!csv) throw InvalidArgument("cannot open " + path.string() + " for writing");
  csv << "time";
  for (const auto c : comps) csv << ",re_" << c + 1 << ",im_" << c + 1;
  csv << ",norm\n" << std::setprecision(17);

  CVector x = basis_state(in.model.dim(), t.j);
  double prev = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double time =
        rows == 1 ? 0.0 : t_end * static_cast<double>(i) / static_cast<double>(rows - 1);
    x = evo.apply(prev, time, x);
    prev = time;
    csv << time;
    for (const auto c : comps) {
      const Complex z = x(static_cast<Eigen::Index>(c));
      csv << ',' << z.real() << ',' << z.imag();
    }
    csv << ',' << x.norm() << '\n';
  }
  if (!csv) throw InvalidArgument("write failed for " + path.string());
  out << std::setprecision(10) << "t_end " << t_end << ", |<phi_k, x>| = "
      << std::abs(x(static_cast<Eigen::Index>(t.k))) << ", deficit "
      << 1.0 - std::abs(x(static_cast<Eigen::Index>(t.k))) << ", norm " << x.norm() << '\n'
      << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  apply_threads(config);
  const Loaded in = load(config);
  const Transition t = config.transition;
  const auto ns = config.ns.value_or(kDefaultNs);
  const HypothesisReport rep =
      check_theorem_hypotheses(in.control, in.model, t, config.max_harmonic, config.tol);
  if (!rep.verdict) throw HypothesisError(rep.to_text());
  const RwaConstants c = constants(in.model, in.control, t, config.max_harmonic, config.tol);
  const auto recs = convergence_sweep(in.model, in.control, t, ns, sweep_options(config));
  const SweepSummary s = summarize(recs, c, in.model);

  prepare_out(config.out_dir);
  export_csv(recs, config.out_dir / "sweep.csv");
  json j;
  j["transition"] = {t.j + 1, t.k + 1};
  j["constants"] = to_json(c);
  j["hypotheses"] = to_json(rep);
  j["records"] = json::array();
  for (const auto& r : recs) j["records"].push_back(to_json(r));
  j["summary"] = summary_json(s);
  export_json(j, config.out_dir / "sweep.json");
  emit_plot_script("sweep.csv", config.out_dir / "plot.gp");

  out << std::setprecision(8) << "E = " << c.E << ", T* = " << c.T_star << ", K = " << c.K
      << ", C = " << c.C << '\n';
  print_records(out, recs);
  print_summary(out, s);
  return kOk;
}

int cmd_morse(const RunConfig& config, std::ostream& out) {
  apply_threads(config);
  const MorseSpec spec = morse_spec_from_json(config.morse);
  const auto ns = config.ns.value_or(kDefaultMorseNs);
  const MorseReport rep = morse_pipeline(spec, ns, config.cosine_pieces, sweep_options(config));
  const SweepSummary s = summarize(rep.sweep, rep.constants, build_morse(spec).model);

  prepare_out(config.out_dir);
  export_csv(rep.sweep, config.out_dir / "morse.csv");
  json j = to_json(rep);
  j["summary"] = summary_json(s);
  export_json(j, config.out_dir / "morse.json");
  emit_plot_script("morse.csv", config.out_dir / "plot.gp");

  const auto& d = rep.diagnostics;
  out << "alpha " << spec.alpha << ", grid step " << std::setprecision(6) << d.grid_step << ", "
      << d.bound_states << " bound states, " << d.continuum_states << " continuum states kept\n";
  out << std::setw(4) << "n" << std::setw(16) << "computed" << std::setw(16) << "analytic"
      << std::setw(14) << "rel error" << '\n';
  for (std::size_t i = 0; i < d.computed.size(); ++i) {
    out << std::setw(4) << i << std::setw(16) << std::setprecision(9) << d.computed[i]
        << std::setw(16) << d.analytic[i] << std::setw(14) << std::setprecision(3)
        << d.rel_error[i] << '\n';
  }
  out << std::setprecision(6) << "gap margin " << rep.gap_margin << " vs 5 alpha - 17 = "
      << rep.gap_margin_claim << (rep.gap_claim_holds ? " (holds)" : " (FAILS)") << '\n';
  out << "hypotheses for (1,2): " << (rep.hypotheses.verdict ? "PASS" : "FAIL") << '\n';
  print_records(out, rep.sweep);
  print_summary(out, s);
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotating-wave averaging for bilinear quantum control"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rwa 1.0");

  std::string config_path, model_path, control_path, transition, ns, components, out_dir;
  std::optional<double> tol, t_end, alpha, ceiling;
  std::optional<int> threads, max_harmonic;
  std::optional<unsigned> n;
  std::optional<std::size_t> samples, grid_points, cosine_pieces;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--model", model_path, "model JSON file");
  app.add_option("--control", control_path, "control JSON file");
  app.add_option("--transition", transition, "driven pair j,k (1-based)");
  app.add_option("--ns", ns, "comma-separated n values");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tol, "degeneracy / cancellation tolerance");
  app.add_option("--max-harmonic", max_harmonic, "largest harmonic checked");
  app.add_option("--threads", threads, "cap on worker threads (0: all)");

  auto* check = app.add_subcommand("check", "check the averaging hypotheses");
  auto* simulate = app.add_subcommand("simulate", "propagate and dump a trajectory");
  simulate->add_option("--n", n, "control scaling u/n");
  simulate->add_option("--t-end", t_end, "horizon (default T*_n)");
  simulate->add_option("--samples", samples, "rows in the trajectory CSV");
  simulate->add_option("--components", components, "1-based levels to record");
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over n");
  auto* morse = app.add_subcommand("morse", "Morse oscillator pipeline");
  morse->add_option("--alpha", alpha, "well depth parameter");
  morse->add_option("--grid-points", grid_points, "interior grid points");
  morse->add_option("--ceiling", ceiling, "continuum energy ceiling");
  morse->add_option("--cosine-pieces", cosine_pieces, "pieces per cosine period");
  for (auto* sub : {check, simulate, sweep, morse}) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!model_path.empty()) c.model = read_json_file(model_path);
    if (!control_path.empty()) c.control = read_json_file(control_path);
    if (!transition.empty()) c.transition = parse_transition(transition);
    if (!ns.empty()) c.ns = parse_ns(ns);
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (tol) c.tol = *tol;
    if (max_harmonic) c.max_harmonic = *max_harmonic;
    if (threads) c.threads = *threads;
    if (n) c.n = *n;
    if (t_end) c.t_end = *t_end;
    if (samples) c.samples = *samples;
    if (!components.empty()) c.components = parse_components(components);
    if (alpha) c.morse["alpha"] = *alpha;
    if (grid_points) c.morse["grid_points"] = *grid_points;
    if (ceiling) c.morse["energy_ceiling"] = *ceiling;
    if (cosine_pieces) c.cosine_pieces = *cosine_pieces;
    if (!(c.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    if (c.max_harmonic < 2) throw InvalidArgument("--max-harmonic must be at least 2");

    if (check->parsed()) return cmd_check(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (sweep->parsed()) return cmd_sweep(c, out);
    return cmd_morse(c, out);
  } catch (const HypothesisError& e) {
    err << e.what() << '\n';
    return kHypothesis;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace rwa::cli
