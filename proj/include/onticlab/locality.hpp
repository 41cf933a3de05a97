#pragma once

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "onticlab/hidden_model.hpp"
#include "onticlab/qstate.hpp"

namespace onticlab {

/// Exact probabilities for the two-region detection calculus.
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);
/// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

enum class AssignmentMode { psi_complete, epistemic };

const char* to_string(AssignmentMode m);

enum class Region { A = 0, B = 1 };

/// Ontic description of the detection state.
///
/// psi_complete: the single label Psi. epistemic: two cells lambda_A,
/// lambda_B of hidden indices inside lambda_Psi; they must be disjoint for
/// the epistemic calculus to apply.
struct OntAssignment {
  AssignmentMode mode = AssignmentMode::psi_complete;
  std::string label = "Psi";
  std::vector<std::size_t> cell_a;
  std::vector<std::size_t> cell_b;

  static OntAssignment psi_complete(std::string label = "Psi");
  static OntAssignment epistemic(std::vector<std::size_t> cell_a, std::vector<std::size_t> cell_b);
  /// Cells of quantum basis directions 0 and 1 in `space`.
  static OntAssignment epistemic(const HiddenSpace& space);

  bool disjoint() const;
};

/// Particle passing a pinhole and a detector with regions A and B:
/// |Psi> = a |psi>_A |chi>_A + b |psi>_B |chi>_B.
struct DetectionScenario {
  std::array<std::string, 2> regions{"A", "B"};
  std::array<Complex, 2> amplitudes{};
  /// |amplitude|^2 for each branch, exact.
  std::array<Rational, 2> weights{};
  OntAssignment assignment;

  /// a = b = 1/sqrt(2), weights exactly 1/2.
  static DetectionScenario balanced(OntAssignment assignment);
  /// Branch weights given exactly; they must sum to 1.
  static DetectionScenario from_weights(Rational w_a, Rational w_b, OntAssignment assignment);
  /// Weights are the exact rational values of |a|^2, |b|^2 as doubles; the
  /// norm must be 1 within 1e-12.
  static DetectionScenario from_amplitudes(Complex a, Complex b, OntAssignment assignment);

  const Rational& weight(Region r) const { return weights[static_cast<std::size_t>(r)]; }
};

/// p(1_A ^ 1_B | Psi) under locality, p(1_A|Psi) p(1_B|Psi).
Rational joint_detection_ontic(const DetectionScenario& s);

/// p(1_A ^ 1_B | lambda_A ^ lambda_B) = p(1_A|lambda_A) p(1_B|lambda_A).
Rational joint_detection_epistemic(const DetectionScenario& s);

/// ||P_both |Psi>||^2 where P_both projects onto both detectors having fired.
Rational quantum_joint_prediction(const DetectionScenario& s);

/// Single-detection probabilities in each description.
Rational ontic_marginal(const DetectionScenario& s, Region r);
Rational epistemic_marginal(const DetectionScenario& s, Region r);
Rational quantum_marginal(const DetectionScenario& s, Region r);

/// Entries p(event | condition, ontic label). An empty condition means
/// "no prior detection".
class ConditionalProbabilityTable {
public:
  struct Key {
    std::string event;
    std::string condition;
    std::string ontic;
    auto operator<=>(const Key&) const = default;
  };

  /// Rejects values outside [0, 1].
  void set(const std::string& event, const std::string& condition, const std::string& ontic,
           Rational p);
  const Rational* find(const std::string& event, const std::string& condition,
                       const std::string& ontic) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<Key, Rational>& entries() const noexcept { return entries_; }

private:
  std::map<Key, Rational> entries_;
};

/// Human-readable form p(event|condition,ontic).
std::string describe(const ConditionalProbabilityTable::Key& k);

/// The table the psi-complete calculus builds, with locality imposed.
ConditionalProbabilityTable ontic_table(const DetectionScenario& s);
/// The table the epistemic calculus builds from the cell assignment.
ConditionalProbabilityTable epistemic_table(const DetectionScenario& s);

struct EquationCheck {
  std::string lhs_name;
  std::string rhs_name;
  Rational lhs;
  Rational rhs;
  Rational residual;  ///< |lhs - rhs|
  bool ok = false;
};

struct LocalityReport {
  AssignmentMode mode = AssignmentMode::psi_complete;
  std::vector<EquationCheck> equations;
  Rational joint;          ///< chain-rule joint probability from the table
  Rational quantum_joint;  ///< the quantum prediction it is compared with
  Rational born_residual;  ///< |joint - quantum_joint|
  bool locality_ok = false;
  bool born_ok = false;
};

/// Checks the conditional-independence equations locality demands for the
/// assignment's mode, then compares the chain-rule joint probability with
/// `quantum_joint`. Throws InvalidArgument naming every missing entry.
LocalityReport locality_audit(const ConditionalProbabilityTable& table,
                              const OntAssignment& assignment,
                              const Rational& quantum_joint = Rational(0));

/// {mode, equations: [{equation, lhs, rhs, residual, ok}], born_residual, ...}
nlohmann::json to_json(const LocalityReport& r);

} // namespace onticlab
