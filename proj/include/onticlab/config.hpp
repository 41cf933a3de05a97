#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "onticlab/error.hpp"

namespace onticlab {

enum class Experiment { born_check, theorem1, hidden_roundtrip, theorem2, sharpen_sweep };
enum class OutputFormat { csv, json };
/// born-check pairs: independent random states, or phi = psi.
enum class PairMode { random, identical };

const char* to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view s);
const char* to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view s);

enum class ErrorCode {
  unknown_experiment,
  unknown_key,
  parse_error,
  invalid_value,
  unreadable_config,
  unwritable_path,
};

const char* to_string(ErrorCode c);

/// Configuration problem. `line` is 0 when the problem is not tied to a line.
class ConfigError : public Error {
public:
  ConfigError(ErrorCode code, const std::string& msg, int line = 0);
  ErrorCode code() const noexcept { return code_; }
  int line() const noexcept { return line_; }

private:
  ErrorCode code_;
  int line_;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::born_check;
  std::size_t grid_theta = 200;
  std::size_t grid_phi = 400;
  double dt = 1e-2;
  double hbar = 1.0;
  std::size_t qdim = 2;
  std::size_t smear_m = 4;
  std::uint64_t seed = 1;
  std::string output_path;  ///< empty: standard output
  OutputFormat format = OutputFormat::csv;
  std::size_t pairs = 50;
  PairMode pair_mode = PairMode::random;
  /// theorem1 runs dt, dt/10, ... for this many steps.
  std::size_t dt_steps = 3;
  /// "uniform" or "gaussian"
  std::string profile = "uniform";
  double profile_width = 1.0;
  /// Worker threads for grid integrals. Never changes the output.
  unsigned threads = 1;

  /// Throws ConfigError(invalid_value) naming the first bad field.
  void validate() const;
};

/// Applies one `key=value` assignment. Throws ConfigError.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value,
                   int line = 0);

/// Flat key=value text, one pair per line, '#' starts a comment, blank lines
/// ignored, unknown keys rejected. Every key is optional.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::string& path);

} // namespace onticlab
