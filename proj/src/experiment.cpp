#include "onticlab/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "onticlab/error.hpp"
#include "onticlab/format.hpp"
#include "onticlab/hidden_model.hpp"
#include "onticlab/locality.hpp"
#include "onticlab/ontic_frame.hpp"
#include "onticlab/qstate.hpp"

namespace onticlab {

namespace {

using Row = std::vector<ReportCell>;

SmearProfile make_profile(const ExperimentConfig& cfg) {
  return cfg.profile == "gaussian" ? SmearProfile::gaussian(cfg.smear_m, cfg.profile_width)
                                   : SmearProfile::uniform(cfg.smear_m);
}

// The reference single-qubit setup: H = diag(1, -1), psi = (|0> + |1>)/sqrt(2).
HermitianOperator reference_hamiltonian() { return HermitianOperator::diagonal({1.0, -1.0}); }
StateVector reference_state() { return StateVector::normalized(std::vector<Complex>{1.0, 1.0}); }

void born_check(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"pair_id", "overlap_exact", "born_integral", "abs_error"};
  const auto grid = OnticGrid::sphere(cfg.grid_theta, cfg.grid_phi);
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.pairs; ++k) {
    const StateVector psi = StateVector::random_qubit(rng);
    const StateVector phi =
        cfg.pair_mode == PairMode::identical ? psi : StateVector::random_qubit(rng);
    const double exact = overlap_sq(phi, psi);
    const double integral =
        born_integral(ks_response(phi, grid), ks_distribution(psi, grid), cfg.threads);
    rep.rows.push_back(Row{static_cast<long long>(k), exact, integral, std::abs(integral - exact)});
  }
}

void theorem1(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"dt",        "delta_H_sq", "frozen_integral", "updated_integral",
                 "born_value", "deficit",    "deficit_over_dt2"};
  const auto grid = OnticGrid::sphere(cfg.grid_theta, cfg.grid_phi);
  const auto model = make_ks_model(grid);
  const auto h = reference_hamiltonian();
  const auto psi = reference_state();
  const double var = energy_variance(psi, h);
  double dt = cfg.dt;
  for (std::size_t k = 0; k < cfg.dt_steps; ++k, dt /= 10.0) {
    const auto r = frozen_response_test(psi, h, EvolutionParams{cfg.hbar, dt}, model, cfg.threads);
    rep.rows.push_back(Row{dt, var, r.frozen_integral, r.updated_integral, r.born_value, r.deficit,
                           r.deficit / (dt * dt)});
  }
}

void hidden_roundtrip(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"pair_id", "qm_overlap_sq", "eq10_value", "abs_error"};
  const HiddenSpace space(cfg.qdim, cfg.smear_m);
  const SmearProfile profile = make_profile(cfg);
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.pairs; ++k) {
    const StateVector psi = StateVector::random(cfg.qdim, rng);
    const StateVector phi = StateVector::random(cfg.qdim, rng);
    const double qm = overlap_sq(phi, psi);
    const double trans = transition_probability(prepare({"P_phi", phi, profile}, space),
                                               prepare({"P_psi", psi, profile}, space));
    rep.rows.push_back(Row{static_cast<long long>(k), qm, trans, std::abs(trans - qm)});
  }
}

void theorem2(const ExperimentConfig&, ExperimentReport& rep) {
  rep.columns = {"mode", "joint_prob", "quantum_pred", "residual"};
  const auto ontic = DetectionScenario::balanced(OntAssignment::psi_complete());
  const auto epi = DetectionScenario::balanced(OntAssignment::epistemic(HiddenSpace(2, 1)));

  const Rational q_ontic = quantum_joint_prediction(ontic);
  const Rational j_ontic = joint_detection_ontic(ontic);
  const Rational q_epi = quantum_joint_prediction(epi);
  const Rational j_epi = joint_detection_epistemic(epi);
  auto residual = [](const Rational& a, const Rational& b) { return to_double(a > b ? a - b : b - a); };
  rep.rows.push_back(Row{std::string("psi_complete"), to_double(j_ontic), to_double(q_ontic),
                         residual(j_ontic, q_ontic)});
  rep.rows.push_back(Row{std::string("epistemic"), to_double(j_epi), to_double(q_epi),
                         residual(j_epi, q_epi)});
}

void sharpen_sweep(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"m", "deviation"};
  std::mt19937_64 rng(cfg.seed);
  const StateVector target = StateVector::random(cfg.qdim, rng);
  for (std::size_t m = 1; m <= cfg.smear_m; ++m) {
    ExperimentConfig c = cfg;
    c.smear_m = m;
    const HiddenSpace space(cfg.qdim, m);
    const auto r = sharpen(space, Preparation{"P_psi", target, make_profile(c)});
    rep.rows.push_back(Row{static_cast<long long>(r.m), r.trace_distance_to_complete});
  }
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg) {
  // threads is deliberately absent: it must not change the output bytes.
  return {{"tool", std::string("onticlab ") + kVersion},
          {"experiment", to_string(cfg.experiment)},
          {"grid_theta", std::to_string(cfg.grid_theta)},
          {"grid_phi", std::to_string(cfg.grid_phi)},
          {"dt", format_double(cfg.dt)},
          {"dt_steps", std::to_string(cfg.dt_steps)},
          {"hbar", format_double(cfg.hbar)},
          {"qdim", std::to_string(cfg.qdim)},
          {"smear_m", std::to_string(cfg.smear_m)},
          {"profile", cfg.profile},
          {"profile_width", format_double(cfg.profile_width)},
          {"pairs", std::to_string(cfg.pairs)},
          {"pair_mode", cfg.pair_mode == PairMode::random ? "random" : "identical"},
          {"seed", std::to_string(cfg.seed)}};
}

std::string cell_text(const ReportCell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else return std::to_string(v);
      },
      c);
}

} // namespace

double ExperimentReport::number(std::size_t row, std::size_t col) const {
  const auto& c = rows.at(row).at(col);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw InvalidArgument("ExperimentReport::number: cell is not numeric");
}

std::size_t ExperimentReport::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw InvalidArgument("ExperimentReport: no column '" + name + "'");
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.experiment = to_string(cfg.experiment);
  rep.metadata = config_echo(cfg);
  switch (cfg.experiment) {
    case Experiment::born_check: born_check(cfg, rep); break;
    case Experiment::theorem1: theorem1(cfg, rep); break;
    case Experiment::hidden_roundtrip: hidden_roundtrip(cfg, rep); break;
    case Experiment::theorem2: theorem2(cfg, rep); break;
    case Experiment::sharpen_sweep: sharpen_sweep(cfg, rep); break;
  }
  for (const auto& row : rep.rows) {
    if (row.size() != rep.columns.size()) throw NumericalError("report row has the wrong width");
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c); d && !std::isfinite(*d)) {
        throw NumericalError(rep.experiment + ": non-finite result");
      }
    }
  }
  return rep;
}

std::string render(const ExperimentReport& report, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out;
    for (const auto& [k, v] : report.metadata) out += "# " + k + "=" + v + "\n";
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      out += (i ? "," : "") + report.columns[i];
    }
    out += "\n";
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
      out += "\n";
    }
    return out;
  }

  nlohmann::ordered_json j;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["columns"] = report.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

ExperimentReport run(const ExperimentConfig& cfg) {
  ExperimentReport rep = run_experiment(cfg);
  const std::string text = render(rep, cfg.format);
  if (cfg.output_path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
      throw ConfigError(ErrorCode::unwritable_path,
                        "cannot write output file '" + cfg.output_path + "'");
    }
  }
  return rep;
}

} // namespace onticlab
