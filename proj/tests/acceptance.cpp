// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "onticlab/experiment.hpp"
#include "onticlab/hidden_model.hpp"
#include "onticlab/locality.hpp"
#include "onticlab/ontic_frame.hpp"
#include "onticlab/qstate.hpp"

using namespace onticlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

StateVector plus() { return StateVector::normalized(std::vector<Complex>{1.0, 1.0}); }
HermitianOperator sigma_z() { return HermitianOperator::diagonal({1.0, -1.0}); }

constexpr std::uint64_t kSeed = 20240601;

Outcome born_rule_reproduction() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto grid = OnticGrid::sphere(200, 400);
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  double worst_norm = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto psi = StateVector::random_qubit(rng);
    const auto phi = StateVector::random_qubit(rng);
    const auto mu = ks_distribution(psi, grid);
    worst_norm = std::max(worst_norm, std::abs(check_normalization(mu) - 1.0));
    worst = std::max(worst, std::abs(born_integral(ks_response(phi, grid), mu) - overlap_sq(phi, psi)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst < 1e-4, "max |born_integral - |<phi|psi>|^2| < 1e-4");
  o.require(worst_norm < 1e-6, "normalization within 1e-6");
  o.require(secs < 10.0, "runtime < 10 s");
  o.note("max err " + sci(worst) + ", norm err " + sci(worst_norm) + ", " + sci(secs) + " s");
  return o;
}

Outcome theorem1_deficit() {
  Outcome o;
  const auto model = make_ks_model(OnticGrid::sphere(200, 400));
  const double var = energy_variance(plus(), sigma_z());
  for (double dt : {1e-2, 1e-3}) {
    const auto r = frozen_response_test(plus(), sigma_z(), {1.0, dt}, model);
    const double exact = std::cos(dt) * std::cos(dt);
    const double ratio = r.deficit / (dt * dt * var);
    const std::string at = " (dt=" + sci(dt) + ")";
    o.require(std::abs(r.frozen_integral - 1.0) < 1e-4, "frozen_integral = 1 within 1e-4" + at);
    o.require(std::abs(r.born_value - exact) < 1e-8, "born_value within 1e-8 of exact overlap" + at);
    o.require(std::abs(r.born_value - (1.0 - dt * dt * var)) < 1e-8,
              "born_value = 1 - dt^2 dH^2 within 1e-8" + at);
    o.require(ratio >= 0.95 && ratio <= 1.05, "deficit/(dt^2 dH^2) in [0.95, 1.05]" + at);
    o.require(std::abs(r.updated_integral - r.born_value) < 1e-4,
              "updated_integral matches born_value within 1e-4" + at);
    o.note("dt=" + sci(dt) + " ratio " + sci(ratio) + " |upd-born| " +
           sci(std::abs(r.updated_integral - r.born_value)));
  }
  return o;
}

Outcome fubini_study_law() {
  Outcome o;
  std::vector<std::pair<StateVector, HermitianOperator>> cases{{plus(), sigma_z()}};
  std::mt19937_64 rng(kSeed + 3);
  for (int i = 0; i < 5; ++i) {
    cases.emplace_back(StateVector::random(2, rng), HermitianOperator::random(2, rng));
  }
  const double dts[] = {1e-2, 1e-3, 1e-4};
  double min_ratio = 1e300;
  for (const auto& [psi, h] : cases) {
    const double var = energy_variance(psi, h);
    double resid[3];
    for (int k = 0; k < 3; ++k) {
      const double dt = dts[k];
      resid[k] = std::abs(fubini_study_dist2(psi, evolve(psi, h, {1.0, dt})) - 4 * dt * dt * var);
    }
    for (int k = 0; k < 2; ++k) {
      // shrinking at least as dt^3 means a factor of 1000 per decade
      const double ratio = resid[k] / resid[k + 1];
      min_ratio = std::min(min_ratio, ratio);
      o.require(ratio >= 1e3, "residual shrinks at least as dt^3");
    }
  }
  const double eig = fubini_study_dist2(StateVector::basis(2, 0),
                                        evolve(StateVector::basis(2, 0), sigma_z(), {1.0, 1e-2}));
  o.require(eig < 1e-20, "eigenstate dD^2 < 1e-20");
  o.note("min decade ratio " + sci(min_ratio) + ", eigenstate dD^2 " + sci(eig));
  return o;
}

Outcome hidden_state_model() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 4);
  double fid_err = 0.0, norm_err = 0.0, trans_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + rng() % 7;
    const std::size_t m = 1 + rng() % 16;
    const HiddenSpace space(d, m);
    const auto profile = (i % 2) ? SmearProfile::uniform(m) : SmearProfile::gaussian(m, 1.5);
    const auto phi = StateVector::random(d, rng);
    const auto psi = StateVector::random(d, rng);
    const auto a_phi = prepare({"P_phi", phi, profile}, space);
    const auto a_psi = prepare({"P_psi", psi, profile}, space);

    const CVector back = project(reconstruct(a_psi), space, profile);
    fid_err = std::max(fid_err, std::abs(std::norm(psi.amplitudes().dot(back)) - 1.0));
    norm_err = std::max(norm_err, std::abs(a_psi.values().squaredNorm() - 1.0));
    trans_err = std::max(trans_err, std::abs(transition_probability(a_phi, a_psi) - overlap_sq(phi, psi)));
  }
  o.require(fid_err < 1e-12, "round-trip fidelity error < 1e-12");
  o.require(norm_err < 1e-12, "sum |A|^2 = 1 within 1e-12");
  o.require(trans_err < 1e-12, "transition probability = |<phi|psi>|^2 within 1e-12");
  o.note("fid " + sci(fid_err) + ", norm " + sci(norm_err) + ", transition " + sci(trans_err));
  return o;
}

Outcome sharpening_limit() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 5);
  double worst = 0.0;
  for (std::size_t d = 2; d <= 8; ++d) {
    const HiddenSpace space(d, 1);
    const auto psi = StateVector::random(d, rng);
    const Preparation prep{"P_psi", psi, SmearProfile::uniform(1)};
    o.require(sharpen(space, prep).trace_distance_to_complete == 0.0, "m = 1 deviation is 0");
    const auto rec = reconstruct(prepare(prep, space));
    worst = std::max(worst, (rec.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-15, "reconstruction equals the psi-complete embedding within 1e-15");
  o.note("max entry deviation " + sci(worst));
  return o;
}

Outcome theorem2_exactness() {
  Outcome o;
  const auto ontic = DetectionScenario::balanced(OntAssignment::psi_complete());
  const auto epi = DetectionScenario::balanced(OntAssignment::epistemic(HiddenSpace(2, 1)));
  const Rational half(1, 2);
  o.require(joint_detection_ontic(ontic) == Rational(1, 4), "ontic joint = 1/4 exactly");
  o.require(joint_detection_epistemic(epi) == 0, "epistemic joint = 0 exactly");
  o.require(quantum_joint_prediction(ontic) == 0 && quantum_joint_prediction(epi) == 0,
            "quantum joint = 0 exactly");
  for (Region r : {Region::A, Region::B}) {
    o.require(ontic_marginal(ontic, r) == half, "ontic marginal = 1/2");
    o.require(epistemic_marginal(epi, r) == half, "epistemic marginal = 1/2");
    o.require(quantum_marginal(ontic, r) == half, "quantum marginal = 1/2");
  }
  o.note("ontic " + to_string(joint_detection_ontic(ontic)) + ", epistemic " +
         to_string(joint_detection_epistemic(epi)) + ", quantum " +
         to_string(quantum_joint_prediction(ontic)));
  return o;
}

Outcome bayesian_update_criterion() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 7);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + rng() % 7;
    const std::size_t m = 1 + rng() % 16;
    const HiddenSpace space(d, m);
    const auto a = prepare({"P", StateVector::random(d, rng), SmearProfile::uniform(m)}, space);
    const auto cell = space.cell_of(rng() % d);
    const auto post = bayesian_update(a, cell);
    worst = std::max(worst, std::abs(post.values().squaredNorm() - 1.0));
    for (std::size_t l : post.support()) {
      o.require(space.owner_of(l) == space.owner_of(cell.front()), "support inside revealed cell");
    }
    o.require(bayesian_update(post, cell).values() == post.values(), "idempotent");
  }
  o.require(worst < 1e-12, "posterior normalized within 1e-12");
  o.note("max norm err " + sci(worst));
  return o;
}

Outcome determinism() {
  Outcome o;
  for (Experiment e : {Experiment::theorem1, Experiment::born_check}) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    std::string reference;
    for (unsigned threads : {1u, 1u, 1u, 4u, 8u}) {
      cfg.threads = threads;
      const std::string out = render(run_experiment(cfg), OutputFormat::csv);
      if (reference.empty()) reference = out;
      o.require(out == reference,
                std::string(to_string(e)) + " byte-identical with " + std::to_string(threads) + " workers");
    }
    o.note(std::string(to_string(e)) + " " + std::to_string(reference.size()) + " bytes");
  }
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 Born-rule reproduction", born_rule_reproduction},
      {"2 Frozen-response deficit", theorem1_deficit},
      {"3 Fubini-Study small-dt law", fubini_study_law},
      {"4 Hidden-state model", hidden_state_model},
      {"5 Sharpening limit", sharpening_limit},
      {"6 Two-region detection exactness", theorem2_exactness},
      {"7 Bayesian update", bayesian_update_criterion},
      {"8 Determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
