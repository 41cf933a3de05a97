#include "onticlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "onticlab/format.hpp"

namespace onticlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v, int line) {
  Int x{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(ErrorCode::parse_error,
                      std::string(key) + " expects a nonnegative integer, got '" + std::string(v) + "'",
                      line);
  }
  return x;
}

double parse_real(std::string_view key, std::string_view v, int line) {
  auto x = parse_double(v);
  if (!x) {
    throw ConfigError(ErrorCode::parse_error,
                      std::string(key) + " expects a number, got '" + std::string(v) + "'", line);
  }
  return *x;
}

void require(bool ok, const std::string& msg, int line = 0) {
  if (!ok) throw ConfigError(ErrorCode::invalid_value, msg, line);
}

} // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::born_check: return "born-check";
    case Experiment::theorem1: return "theorem1";
    case Experiment::hidden_roundtrip: return "hidden-roundtrip";
    case Experiment::theorem2: return "theorem2";
    case Experiment::sharpen_sweep: return "sharpen-sweep";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view s) {
  for (auto e : {Experiment::born_check, Experiment::theorem1, Experiment::hidden_roundtrip,
                 Experiment::theorem2, Experiment::sharpen_sweep}) {
    if (s == to_string(e)) return e;
  }
  return std::nullopt;
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  return std::nullopt;
}

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::unknown_experiment: return "unknown_experiment";
    case ErrorCode::unknown_key: return "unknown_key";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::invalid_value: return "invalid_value";
    case ErrorCode::unreadable_config: return "unreadable_config";
    case ErrorCode::unwritable_path: return "unwritable_path";
  }
  return "?";
}

ConfigError::ConfigError(ErrorCode code, const std::string& msg, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), code_(code), line_(line) {}

void ExperimentConfig::validate() const {
  require(grid_theta > 0, "grid_theta must be positive");
  require(grid_phi > 0, "grid_phi must be positive");
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
  require(qdim >= 2, "qdim must be at least 2");
  require(smear_m >= 1, "smear_m must be at least 1");
  require(pairs >= 1, "pairs must be positive");
  require(dt_steps >= 1, "dt_steps must be positive");
  require(profile == "uniform" || profile == "gaussian", "profile must be uniform or gaussian");
  require(std::isfinite(profile_width) && profile_width > 0.0, "profile_width must be positive");
  require(threads >= 1, "threads must be positive");
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view v, int line) {
  if (key == "experiment") {
    auto e = parse_experiment(v);
    if (!e) throw ConfigError(ErrorCode::unknown_experiment, "unknown experiment '" + std::string(v) + "'", line);
    cfg.experiment = *e;
  } else if (key == "grid_theta") {
    cfg.grid_theta = parse_int<std::size_t>(key, v, line);
    require(cfg.grid_theta > 0, "grid_theta must be positive", line);
  } else if (key == "grid_phi") {
    cfg.grid_phi = parse_int<std::size_t>(key, v, line);
    require(cfg.grid_phi > 0, "grid_phi must be positive", line);
  } else if (key == "dt") {
    cfg.dt = parse_real(key, v, line);
    require(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt must be positive", line);
  } else if (key == "hbar") {
    cfg.hbar = parse_real(key, v, line);
    require(std::isfinite(cfg.hbar) && cfg.hbar > 0.0, "hbar must be positive", line);
  } else if (key == "qdim") {
    cfg.qdim = parse_int<std::size_t>(key, v, line);
    require(cfg.qdim >= 2, "qdim must be at least 2", line);
  } else if (key == "smear_m") {
    cfg.smear_m = parse_int<std::size_t>(key, v, line);
    require(cfg.smear_m >= 1, "smear_m must be at least 1", line);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, v, line);
  } else if (key == "output_path") {
    cfg.output_path = std::string(v);
  } else if (key == "format") {
    auto f = parse_format(v);
    require(f.has_value(), "format must be csv or json", line);
    cfg.format = *f;
  } else if (key == "pairs") {
    cfg.pairs = parse_int<std::size_t>(key, v, line);
    require(cfg.pairs >= 1, "pairs must be positive", line);
  } else if (key == "pair_mode") {
    require(v == "random" || v == "identical", "pair_mode must be random or identical", line);
    cfg.pair_mode = v == "random" ? PairMode::random : PairMode::identical;
  } else if (key == "dt_steps") {
    cfg.dt_steps = parse_int<std::size_t>(key, v, line);
    require(cfg.dt_steps >= 1, "dt_steps must be positive", line);
  } else if (key == "profile") {
    require(v == "uniform" || v == "gaussian", "profile must be uniform or gaussian", line);
    cfg.profile = std::string(v);
  } else if (key == "profile_width") {
    cfg.profile_width = parse_real(key, v, line);
    require(std::isfinite(cfg.profile_width) && cfg.profile_width > 0.0,
            "profile_width must be positive", line);
  } else if (key == "threads") {
    cfg.threads = parse_int<unsigned>(key, v, line);
    require(cfg.threads >= 1, "threads must be positive", line);
  } else {
    throw ConfigError(ErrorCode::unknown_key, "unknown key '" + std::string(key) + "'", line);
  }
}

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig cfg;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ErrorCode::parse_error, "expected key=value", lineno);
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(ErrorCode::parse_error, "empty key", lineno);
    apply_setting(cfg, key, value, lineno);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ErrorCode::unreadable_config, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

} // namespace onticlab
