#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwa/model.hpp"

namespace rwa::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kHypothesis = 2, kNumerical = 3 };

/// Everything a run needs. Model and control are JSON descriptions (see io.hpp);
/// relative file references resolve against `base_dir`.
struct RunConfig {
  nlohmann::json model = {{"builder", "two_level"}};
  nlohmann::json control = {{"builder", "square"}};
  std::filesystem::path base_dir = ".";
  Transition transition{0, 1};
  std::optional<std::vector<unsigned>> ns;
  double tol = kDefaultDegeneracyTol;
  int max_harmonic = kDefaultMaxHarmonic;
  std::filesystem::path out_dir = "rwa_out";
  int threads = 0;  // 0: all available

  // simulate
  unsigned n = 1;
  std::optional<double> t_end;  // default T*_n
  std::size_t samples = 201;
  std::vector<std::size_t> components;  // 0-based; empty selects j and k

  // morse
  nlohmann::json morse = nlohmann::json::object();
  std::size_t cosine_pieces = 512;
};

/// Reads a config file. Keys mirror RunConfig; "transition" and
/// "components" are 1-based as on the command line.
RunConfig load_config(const std::filesystem::path& path);

int cmd_check(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_morse(const RunConfig& config, std::ostream& out);

/// Full command line without the program name. Never throws; errors are
/// written to `err` and mapped to ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwa::cli
