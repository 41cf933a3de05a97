#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "onticlab/qstate.hpp"

namespace onticlab {

/// Ontic sample label. For the qubit instance these are Bloch-sphere angles
/// in radians.
struct OnticPoint {
  double theta = 0.0;
  double phi = 0.0;
};

/// Coordinate rectangle [theta_lo, theta_hi] x [phi_lo, phi_hi] owned by a grid point.
struct CellBounds {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
};

/// Quadrature rule over an ontic space: labelled points with positive
/// weights summing to the total measure of the space. Sphere grids also
/// record the cell each point stands for; imported grids may not.
class OnticGrid {
public:
  OnticGrid(std::vector<OnticPoint> points, std::vector<double> weights, double total_measure,
            std::vector<CellBounds> cells = {});

  /// Product (theta, phi) grid on the unit sphere with cell-centred points.
  /// Each weight is the exact solid angle of its cell,
  /// (cos theta_lo - cos theta_hi) * dphi, so the weights sum to 4 pi.
  static std::shared_ptr<const OnticGrid> sphere(std::size_t n_theta, std::size_t n_phi);

  std::size_t count() const noexcept { return points_.size(); }
  const std::vector<OnticPoint>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_measure() const noexcept { return total_measure_; }
  /// Cartesian unit vector of point i.
  const std::array<double, 3>& direction(std::size_t i) const { return dirs_[i]; }
  bool has_cells() const noexcept { return !cells_.empty(); }
  const CellBounds& cell(std::size_t i) const { return cells_.at(i); }

  /// Same labels and weights.
  bool same_as(const OnticGrid& other) const noexcept;

private:
  std::vector<OnticPoint> points_;
  std::vector<double> weights_;
  std::vector<std::array<double, 3>> dirs_;
  std::vector<CellBounds> cells_;
  double total_measure_;
};

using GridPtr = std::shared_ptr<const OnticGrid>;

/// Density mu(psi|lambda) per unit measure, tabulated on a grid.
class EpistemicDistribution {
public:
  /// Rejects negative or non-finite values and length mismatch. Normalization
  /// is not enforced here; see check_normalization.
  EpistemicDistribution(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }

private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Indicator xi(phi|lambda) with values in [0, 1], tabulated on a grid.
class ResponseFunction {
public:
  ResponseFunction(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }

private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// An ontological model in the preparation/response form: every state gets a
/// distribution over the grid and a response function on it.
struct OntologicalModel {
  std::string name;
  GridPtr grid;
  std::size_t dim = 2;
  std::function<EpistemicDistribution(const StateVector&)> mu_of;
  std::function<ResponseFunction(const StateVector&)> xi_of;
  /// Accuracy to which this model reproduces |<phi|psi>|^2 on its grid.
  double quadrature_tolerance = 1e-4;
};

/// sum_i w_i xi_i mu_i, reduced deterministically whatever `workers` is.
double born_integral(const ResponseFunction& xi, const EpistemicDistribution& mu,
                     unsigned workers = 1);

/// sum_i w_i mu_i
double check_normalization(const EpistemicDistribution& mu, unsigned workers = 1);

/// Fraction of grid cell i lying in the open hemisphere n . lambda > 0.
/// Exact in phi, 32-strip midpoint rule in theta. Grids without cells fall
/// back to the point indicator [n . lambda_i > 0].
double hemisphere_fraction(const std::array<double, 3>& n, const OnticGrid& grid, std::size_t i);

/// Kochen-Specker qubit distribution (1/pi) max(0, n_psi . lambda).
///
/// Sampled at cell centres on cells lying wholly inside the hemisphere of
/// n_psi and set to zero on the cells its boundary cuts, then rescaled so the
/// grid normalization is exact. The response of psi is therefore 1 on the
/// whole support.
EpistemicDistribution ks_distribution(const StateVector& psi, const GridPtr& grid);

/// Kochen-Specker response: the indicator of n_phi . lambda > 0 (ties give 0),
/// tabulated as its average over each cell, see hemisphere_fraction.
ResponseFunction ks_response(const StateVector& phi, const GridPtr& grid);

/// The Kochen-Specker qubit model on the given grid.
OntologicalModel make_ks_model(const GridPtr& grid);

/// Indices i with mu_i > threshold, ascending.
std::vector<std::size_t> support(const EpistemicDistribution& mu, double threshold = 0.0);

/// Intersection of the two supports at threshold 0.
std::vector<std::size_t> overlap_region(const EpistemicDistribution& mu1,
                                        const EpistemicDistribution& mu2);

struct FrozenResponse {
  double frozen_integral = 0.0;   ///< xi held at psi(t), integrated against mu(psi(t))
  double updated_integral = 0.0;  ///< xi of psi(t+dt), integrated against mu(psi(t))
  double born_value = 0.0;        ///< exact |<psi(t+dt)|psi(t)>|^2
  double deficit = 0.0;           ///< frozen_integral - born_value
};

/// Runs one step of Schrodinger evolution and compares what a frozen response
/// function predicts for the overlap with what the Born rule requires.
FrozenResponse frozen_response_test(const StateVector& psi, const HermitianOperator& h,
                                    const EvolutionParams& params,
                                    const OntologicalModel& model, unsigned workers = 1);

/// Tabulated model: grid with mu and xi columns.
struct ModelTable {
  GridPtr grid;
  EpistemicDistribution mu;
  ResponseFunction xi;
};

/// CSV with header `theta,phi,weight,mu,xi`, shortest round-trip decimals,
/// LF line endings.
void write_model_csv(std::ostream& out, const EpistemicDistribution& mu,
                     const ResponseFunction& xi);
/// Inverse of write_model_csv. The grid's total measure is the sum of its weights.
ModelTable read_model_csv(std::istream& in);

} // namespace onticlab
