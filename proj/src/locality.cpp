#include "onticlab/locality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "onticlab/error.hpp"

namespace onticlab {

namespace {

constexpr const char* kEventA = "1_A";
constexpr const char* kEventB = "1_B";
constexpr const char* kCellA = "lambda_A";
constexpr const char* kCellsAB = "lambda_A^lambda_B";

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? a - b : b - a; }

/// Fraction of `cell` lying inside `target`: p(1_X | cell) when region X is
/// revealed exactly by the hidden states in `target`.
Rational cell_detection(const std::vector<std::size_t>& cell,
                        const std::vector<std::size_t>& target) {
  if (cell.empty()) throw InvalidArgument("epistemic assignment: empty cell");
  const std::set<std::size_t> t(target.begin(), target.end());
  const std::set<std::size_t> c(cell.begin(), cell.end());
  std::size_t hits = 0;
  for (auto i : c) hits += t.count(i);
  return Rational(static_cast<long long>(hits)) / Rational(static_cast<long long>(c.size()));
}

void require_mode(const DetectionScenario& s, AssignmentMode m, const char* what) {
  if (s.assignment.mode != m) {
    throw InvalidArgument(std::string(what) + ": scenario is in " +
                          to_string(s.assignment.mode) + " mode");
  }
}

void require_epistemic_cells(const OntAssignment& a, const char* what) {
  if (a.cell_a.empty() || a.cell_b.empty()) {
    throw InvalidArgument(std::string(what) + ": epistemic cells must be non-empty");
  }
  if (!a.disjoint()) {
    throw InvalidArgument(std::string(what) + ": cells lambda_A and lambda_B overlap");
  }
}

} // namespace

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

const char* to_string(AssignmentMode m) {
  return m == AssignmentMode::psi_complete ? "psi_complete" : "epistemic";
}

OntAssignment OntAssignment::psi_complete(std::string label) {
  OntAssignment a;
  a.mode = AssignmentMode::psi_complete;
  a.label = std::move(label);
  return a;
}

OntAssignment OntAssignment::epistemic(std::vector<std::size_t> cell_a,
                                       std::vector<std::size_t> cell_b) {
  OntAssignment a;
  a.mode = AssignmentMode::epistemic;
  a.label = "lambda_Psi";
  a.cell_a = std::move(cell_a);
  a.cell_b = std::move(cell_b);
  return a;
}

OntAssignment OntAssignment::epistemic(const HiddenSpace& space) {
  return epistemic(space.cell_of(0), space.cell_of(1));
}

bool OntAssignment::disjoint() const {
  const std::set<std::size_t> a(cell_a.begin(), cell_a.end());
  return std::none_of(cell_b.begin(), cell_b.end(), [&](std::size_t i) { return a.count(i) > 0; });
}

DetectionScenario DetectionScenario::balanced(OntAssignment assignment) {
  return from_weights(Rational(1, 2), Rational(1, 2), std::move(assignment));
}

DetectionScenario DetectionScenario::from_weights(Rational w_a, Rational w_b,
                                                  OntAssignment assignment) {
  if (w_a < 0 || w_b < 0 || w_a + w_b != 1) {
    throw InvalidArgument("DetectionScenario: branch weights must be nonnegative and sum to 1");
  }
  DetectionScenario s;
  s.amplitudes = {Complex(std::sqrt(to_double(w_a))), Complex(std::sqrt(to_double(w_b)))};
  s.weights = {std::move(w_a), std::move(w_b)};
  s.assignment = std::move(assignment);
  return s;
}

DetectionScenario DetectionScenario::from_amplitudes(Complex a, Complex b,
                                                     OntAssignment assignment) {
  const double n2 = std::norm(a) + std::norm(b);
  if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
    throw InvalidArgument("DetectionScenario: branch amplitudes must have unit norm");
  }
  DetectionScenario s;
  s.amplitudes = {a, b};
  s.weights = {Rational(std::norm(a)), Rational(std::norm(b))};
  s.assignment = std::move(assignment);
  return s;
}

Rational joint_detection_ontic(const DetectionScenario& s) {
  require_mode(s, AssignmentMode::psi_complete, "joint_detection_ontic");
  // Locality: p(1_B | 1_A, Psi) = p(1_B | Psi).
  return ontic_marginal(s, Region::A) * ontic_marginal(s, Region::B);
}

Rational joint_detection_epistemic(const DetectionScenario& s) {
  require_mode(s, AssignmentMode::epistemic, "joint_detection_epistemic");
  const auto& a = s.assignment;
  require_epistemic_cells(a, "joint_detection_epistemic");
  // Locality: p(1_A | lambda_A ^ lambda_B) = p(1_A | lambda_A) and
  // p(1_B | 1_A, lambda_A ^ lambda_B) = p(1_B | lambda_A).
  const Rational p_a = cell_detection(a.cell_a, a.cell_a);
  const Rational p_b_given_a = cell_detection(a.cell_a, a.cell_b);
  return p_a * p_b_given_a;
}

namespace {

// Basis of particle position (A, B) x detector A (0, 1) x detector B (0, 1),
// flat index pos*4 + nA*2 + nB. Branch X puts the particle at X and fires
// detector X only.
constexpr std::size_t branch_index(Region r) { return r == Region::A ? 0 * 4 + 2 : 1 * 4 + 1; }

template <class Pred>
Rational projected_weight(const DetectionScenario& s, Pred in_subspace) {
  // Each branch occupies its own basis vector, so |coefficient|^2 is the
  // branch weight exactly and no cross terms arise.
  static_assert(branch_index(Region::A) != branch_index(Region::B));
  Rational p = 0;
  for (Region r : {Region::A, Region::B}) {
    const std::size_t idx = branch_index(r);
    const bool fired_a = (idx >> 1) & 1U;
    const bool fired_b = idx & 1U;
    if (in_subspace(fired_a, fired_b)) p += s.weight(r);
  }
  return p;
}

} // namespace

Rational quantum_joint_prediction(const DetectionScenario& s) {
  return projected_weight(s, [](bool a, bool b) { return a && b; });
}

Rational quantum_marginal(const DetectionScenario& s, Region r) {
  return projected_weight(s, [r](bool a, bool b) { return r == Region::A ? a : b; });
}

Rational ontic_marginal(const DetectionScenario& s, Region r) {
  // p(1_X | Psi) = |branch amplitude X|^2
  return s.weight(r);
}

Rational epistemic_marginal(const DetectionScenario& s, Region r) {
  require_epistemic_cells(s.assignment, "epistemic_marginal");
  const auto& target = r == Region::A ? s.assignment.cell_a : s.assignment.cell_b;
  // Average over which cell is actual, weighted by |A|^2 of its branch.
  return s.weight(Region::A) * cell_detection(s.assignment.cell_a, target) +
         s.weight(Region::B) * cell_detection(s.assignment.cell_b, target);
}

void ConditionalProbabilityTable::set(const std::string& event, const std::string& condition,
                                      const std::string& ontic, Rational p) {
  if (p < 0 || p > 1) throw InvalidArgument("ConditionalProbabilityTable: entry outside [0,1]");
  entries_[Key{event, condition, ontic}] = std::move(p);
}

const Rational* ConditionalProbabilityTable::find(const std::string& event,
                                                  const std::string& condition,
                                                  const std::string& ontic) const {
  auto it = entries_.find(Key{event, condition, ontic});
  return it == entries_.end() ? nullptr : &it->second;
}

std::string describe(const ConditionalProbabilityTable::Key& k) {
  std::string s = "p(" + k.event + "|";
  if (!k.condition.empty()) s += k.condition + ",";
  return s + k.ontic + ")";
}

ConditionalProbabilityTable ontic_table(const DetectionScenario& s) {
  require_mode(s, AssignmentMode::psi_complete, "ontic_table");
  const std::string& psi = s.assignment.label;
  ConditionalProbabilityTable t;
  t.set(kEventA, "", psi, ontic_marginal(s, Region::A));
  t.set(kEventB, "", psi, ontic_marginal(s, Region::B));
  t.set(kEventB, kEventA, psi, ontic_marginal(s, Region::B));
  return t;
}

ConditionalProbabilityTable epistemic_table(const DetectionScenario& s) {
  require_mode(s, AssignmentMode::epistemic, "epistemic_table");
  const auto& a = s.assignment;
  require_epistemic_cells(a, "epistemic_table");
  const Rational a_given_cell_a = cell_detection(a.cell_a, a.cell_a);
  const Rational b_given_cell_a = cell_detection(a.cell_a, a.cell_b);
  ConditionalProbabilityTable t;
  t.set(kEventA, "", kCellA, a_given_cell_a);
  t.set(kEventB, "", kCellA, b_given_cell_a);
  t.set(kEventA, "", kCellsAB, a_given_cell_a);
  t.set(kEventB, kEventA, kCellsAB, b_given_cell_a);
  return t;
}

LocalityReport locality_audit(const ConditionalProbabilityTable& table,
                              const OntAssignment& assignment, const Rational& quantum_joint) {
  using Key = ConditionalProbabilityTable::Key;
  // (lhs, rhs) pairs that locality equates, plus the two chain-rule factors.
  std::vector<std::pair<Key, Key>> equalities;
  std::pair<Key, Key> chain;
  if (assignment.mode == AssignmentMode::psi_complete) {
    const std::string& psi = assignment.label;
    equalities.push_back({{kEventB, kEventA, psi}, {kEventB, "", psi}});
    chain = {{kEventA, "", psi}, {kEventB, kEventA, psi}};
  } else {
    require_epistemic_cells(assignment, "locality_audit");
    equalities.push_back({{kEventA, "", kCellsAB}, {kEventA, "", kCellA}});
    equalities.push_back({{kEventB, kEventA, kCellsAB}, {kEventB, "", kCellA}});
    chain = {{kEventA, "", kCellsAB}, {kEventB, kEventA, kCellsAB}};
  }

  std::set<Key> required;
  for (const auto& [l, r] : equalities) {
    required.insert(l);
    required.insert(r);
  }
  required.insert(chain.first);
  required.insert(chain.second);

  std::string missing;
  for (const auto& k : required) {
    if (!table.find(k.event, k.condition, k.ontic)) missing += (missing.empty() ? "" : ", ") + describe(k);
  }
  if (!missing.empty()) throw InvalidArgument("locality_audit: missing entries " + missing);

  auto get = [&](const Key& k) { return *table.find(k.event, k.condition, k.ontic); };

  LocalityReport rep;
  rep.mode = assignment.mode;
  rep.locality_ok = true;
  for (const auto& [l, r] : equalities) {
    EquationCheck eq{describe(l), describe(r), get(l), get(r), 0, false};
    eq.residual = abs_diff(eq.lhs, eq.rhs);
    eq.ok = eq.residual == 0;
    rep.locality_ok = rep.locality_ok && eq.ok;
    rep.equations.push_back(std::move(eq));
  }
  rep.joint = get(chain.first) * get(chain.second);
  rep.quantum_joint = quantum_joint;
  rep.born_residual = abs_diff(rep.joint, quantum_joint);
  rep.born_ok = rep.born_residual == 0;
  return rep;
}

nlohmann::json to_json(const LocalityReport& r) {
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : r.equations) {
    eqs.push_back({{"equation", e.lhs_name + " = " + e.rhs_name},
                   {"lhs", to_double(e.lhs)},
                   {"rhs", to_double(e.rhs)},
                   {"residual", to_double(e.residual)},
                   {"ok", e.ok}});
  }
  return {{"mode", to_string(r.mode)},
          {"equations", eqs},
          {"joint", to_double(r.joint)},
          {"quantum_joint", to_double(r.quantum_joint)},
          {"born_residual", to_double(r.born_residual)},
          {"locality_ok", r.locality_ok},
          {"born_ok", r.born_ok}};
}

} // namespace onticlab
