#include "rwa/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rwa/errors.hpp"

namespace rwa {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string(what) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return number(j.at(key), key);
}

RMatrix real_matrix(const json& j, Eigen::Index n, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw InvalidArgument(std::string(what) + " must have " + std::to_string(n) + " rows");
  }
  RMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidArgument(std::string(what) + " row " + std::to_string(r + 1) + " must have " +
                            std::to_string(n) + " entries");
    }
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = number(row.at(static_cast<std::size_t>(c)), what);
  }
  return out;
}

AmplitudeSet amplitude_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "unbounded") return AmplitudeSet::unbounded();
  if (j.is_object() && j.contains("symmetric_interval")) {
    return AmplitudeSet::symmetric_interval(number(j.at("symmetric_interval"), "symmetric_interval"));
  }
  throw InvalidArgument("amplitude_set must be \"unbounded\" or {\"symmetric_interval\": d}");
}

void check_valid(const QuantumModel& model) {
  const auto problems = validate(model);
  if (problems.empty()) return;
  std::string text = "invalid model:";
  for (const auto& p : problems) text += "\n  " + p;
  throw HypothesisError(text);
}

}  // namespace

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

MorseSpec morse_spec_from_json(const json& j) {
  MorseSpec s;
  s.alpha = number_or(j, "alpha", s.alpha);
  s.x_e = number_or(j, "x_e", s.x_e);
  s.cutoff = number_or(j, "M", s.cutoff);
  s.box_length = number_or(j, "L", s.box_length);
  if (j.contains("grid_points")) {
    const double g = number(j.at("grid_points"), "grid_points");
    if (!(g >= 0.0) || g != std::floor(g)) throw InvalidArgument("grid_points must be a whole number");
    s.grid_points = static_cast<std::size_t>(g);
  }
  s.energy_ceiling = number_or(j, "energy_ceiling", s.energy_ceiling);
  check_morse_spec(s);
  return s;
}

QuantumModel model_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("model must be a JSON object");
  if (j.contains("builder")) {
    const std::string kind = j.at("builder").get<std::string>();
    if (kind == "two_level") {
      const json lam = j.value("lambdas", json::array({0.0, 1.0}));
      const json b = j.value("b", json::array({0.0, 0.5}));
      if (lam.size() != 2 || b.size() != 2) {
        throw InvalidArgument("two_level needs lambdas [l1, l2] and b [re, im]");
      }
      QuantumModel m = build_two_level(number(lam[0], "lambdas"), number(lam[1], "lambdas"),
                                       Complex(number(b[0], "b"), number(b[1], "b")));
      check_valid(m);
      return m;
    }
    if (kind == "synthetic") {
      const auto dim = require(j, "dim", "synthetic model").get<std::size_t>();
      const auto gaps = require(j, "gaps", "synthetic model").get<std::vector<double>>();
      const auto seed = require(j, "seed", "synthetic model").get<std::uint64_t>();
      return build_synthetic(dim, gaps, seed);
    }
    if (kind == "morse") {
      const auto levels = j.value("n_levels", std::size_t{0});
      return build_morse(morse_spec_from_json(j), levels).model;
    }
    throw InvalidArgument("unknown model builder '" + kind + "'");
  }

  const auto lambdas = require(j, "lambdas", "model").get<std::vector<double>>();
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  if (j.contains("dim") && j.at("dim").get<Eigen::Index>() != n) {
    throw InvalidArgument("model dim does not match the number of lambdas");
  }
  const RMatrix re = real_matrix(require(j, "coupling_re", "model"), n, "coupling_re");
  const RMatrix im = j.contains("coupling_im") ? real_matrix(j.at("coupling_im"), n, "coupling_im")
                                               : RMatrix(RMatrix::Zero(n, n));
  CMatrix coupling(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) coupling(r, c) = Complex(re(r, c), im(r, c));
  }
  const AmplitudeSet amp =
      j.contains("amplitude_set") ? amplitude_from_json(j.at("amplitude_set")) : AmplitudeSet::unbounded();
  const auto labels = j.value("labels", std::vector<std::string>{});
  QuantumModel model(Eigen::Map<const RVector>(lambdas.data(), n), std::move(coupling), amp, labels);
  check_valid(model);
  return model;
}

nlohmann::json model_to_json(const QuantumModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < n; ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < n; ++c) {
      rr.push_back(model.coupling()(r, c).real());
      ri.push_back(model.coupling()(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  json amp = "unbounded";
  if (model.amplitude_set().kind() == AmplitudeSet::Kind::SymmetricInterval) {
    amp = {{"symmetric_interval", model.amplitude_set().half_width()}};
  }
  std::vector<double> lambdas(model.lambdas().data(), model.lambdas().data() + n);
  return {{"dim", model.dim()},   {"lambdas", lambdas},       {"coupling_re", re},
          {"coupling_im", im},    {"amplitude_set", amp},     {"labels", model.labels()}};
}

PiecewiseConstantControl control_from_json(const json& j, const QuantumModel& model, Transition t) {
  if (!j.is_object()) throw InvalidArgument("control must be a JSON object");
  if (j.contains("pieces") && j.at("pieces").is_array()) {
    std::vector<Piece> pieces;
    for (const auto& p : j.at("pieces")) {
      if (!p.is_array() || p.size() != 2) throw InvalidArgument("each piece must be [value, duration]");
      pieces.push_back({number(p[0], "piece value"), number(p[1], "piece duration")});
    }
    return PiecewiseConstantControl(std::move(pieces));
  }
  const std::string kind = require(j, "builder", "control").get<std::string>();
  check_transition(model, t);
  const double omega = number_or(j, "omega", std::abs(model.lambda(t.k) - model.lambda(t.j)));
  if (kind == "cosine") {
    return sample_cosine(omega, j.value("pieces", std::size_t{512}));
  }
  if (kind == "pulse_train") {
    return pulse_train(omega, number_or(j, "width_fraction", 0.01), number_or(j, "amplitude", 1.0));
  }
  if (kind == "square") return square_wave(omega, number_or(j, "amplitude", 1.0));
  if (kind == "constant") {
    if (!(omega > 0.0)) throw InvalidArgument("constant control needs a positive frequency");
    return PiecewiseConstantControl({{number_or(j, "value", 1.0), 2.0 * std::numbers::pi / omega}});
  }
  throw InvalidArgument("unknown control builder '" + kind + "'");
}

nlohmann::json control_to_json(const PiecewiseConstantControl& u) {
  json pieces = json::array();
  for (const auto& p : u.pieces()) pieces.push_back({p.value, p.duration});
  return {{"pieces", pieces}};
}

nlohmann::json resolve_source(const json& j, const std::filesystem::path& base) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base / p;
    return read_json_file(p);
  }
  return j;
}

}  // namespace rwa
