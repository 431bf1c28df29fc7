#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "rwa/control.hpp"
#include "rwa/model.hpp"
#include "rwa/morse.hpp"

namespace rwa {

/// Parses a JSON file; InvalidArgument names the path on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// A model description is either explicit
///   {"lambdas": [...], "coupling_re": [[...]], "coupling_im": [[...]],
///    "amplitude_set": "unbounded" | {"symmetric_interval": d}, "labels": [...]}
/// or a builder
///   {"builder": "two_level", "lambdas": [l1, l2], "b": [re, im]}
///   {"builder": "synthetic", "dim": D, "gaps": [...], "seed": s}
///   {"builder": "morse", "alpha": ..., "n_levels": ...}
/// Throws HypothesisError when the result fails validate().
QuantumModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const QuantumModel& model);
MorseSpec morse_spec_from_json(const nlohmann::json& j);

/// A control description is {"pieces": [[value, duration], ...]} or a builder
///   {"builder": "cosine", "pieces": P}
///   {"builder": "pulse_train", "width_fraction": d, "amplitude": a}
///   {"builder": "square", "amplitude": a}
///   {"builder": "constant", "value": c}
/// Builders take "omega" when given, else the driven gap of `t`; the
/// constant control lasts one period of that frequency.
PiecewiseConstantControl control_from_json(const nlohmann::json& j, const QuantumModel& model,
                                           Transition t);
nlohmann::json control_to_json(const PiecewiseConstantControl& u);

/// Strings are file paths resolved against `base`; objects are used inline.
nlohmann::json resolve_source(const nlohmann::json& j, const std::filesystem::path& base);

}  // namespace rwa
