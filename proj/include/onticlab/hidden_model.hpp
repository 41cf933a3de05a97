#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "onticlab/qstate.hpp"

namespace onticlab {

/// Enlarged hidden-state space C^(d*m) with an orthonormal basis |k, j>,
/// flat index k*m + j. Quantum basis direction k owns the cell
/// {k*m, ..., k*m + m - 1}; the cells partition the index range.
class HiddenSpace {
public:
  HiddenSpace(std::size_t qdim, std::size_t smear);

  std::size_t qdim() const noexcept { return qdim_; }
  std::size_t smear() const noexcept { return smear_; }
  std::size_t hdim() const noexcept { return qdim_ * smear_; }

  /// Hidden indices of the cell attached to quantum basis index k.
  std::vector<std::size_t> cell_of(std::size_t k) const;
  /// Quantum basis index whose cell contains hidden index `lambda`.
  std::size_t owner_of(std::size_t lambda) const;

  bool operator==(const HiddenSpace&) const = default;

private:
  std::size_t qdim_;
  std::size_t smear_;
};

/// Spread of an amplitude across the m sub-levels of a cell; sum |s_j|^2 = 1.
class SmearProfile {
public:
  explicit SmearProfile(std::vector<Complex> weights);

  /// s_j = 1/sqrt(m)
  static SmearProfile uniform(std::size_t m);
  /// s_j proportional to exp(-(j - (m-1)/2)^2 / (4 width^2)), so |s_j|^2 is a
  /// discrete Gaussian of standard deviation `width`.
  static SmearProfile gaussian(std::size_t m, double width);

  std::size_t size() const noexcept { return w_.size(); }
  const std::vector<Complex>& weights() const noexcept { return w_; }

private:
  std::vector<Complex> w_;
};

/// A(lambda | P_psi) over the hidden basis; sum |A|^2 = 1.
class PropensityAmplitude {
public:
  PropensityAmplitude(HiddenSpace space, CVector values);

  const HiddenSpace& space() const noexcept { return space_; }
  const CVector& values() const noexcept { return values_; }
  Complex operator[](std::size_t lambda) const {
    return values_(static_cast<Eigen::Index>(lambda));
  }
  /// P(lambda | P_psi) = |A|^2
  double probability(std::size_t lambda) const { return std::norm((*this)[lambda]); }
  /// Hidden indices with nonzero amplitude.
  std::vector<std::size_t> support() const;

private:
  HiddenSpace space_;
  CVector values_;
};

/// Preparation procedure P_psi: the quantum state it prepares and the
/// within-cell spread of its amplitude.
struct Preparation {
  std::string label;
  StateVector target;
  SmearProfile profile;
};

/// A(k*m + j) = c_k s_j.
PropensityAmplitude prepare(const Preparation& prep, const HiddenSpace& space);

/// sum_lambda A(lambda) |lambda> in the enlarged space. Rejects amplitudes
/// whose squared norm is off by more than 1e-12.
StateVector reconstruct(const PropensityAmplitude& a);

/// Isometry V: |k> -> sum_j s_j |k, j> applied to psi.
StateVector embed(const StateVector& psi, const HiddenSpace& space, const SmearProfile& profile);

/// V^dagger applied to a hidden-space vector. Norm is not renormalized.
CVector project(const StateVector& hidden, const HiddenSpace& space, const SmearProfile& profile);

/// |sum over the shared support of conj(A_phi) A_psi|^2.
double transition_probability(const PropensityAmplitude& a_phi, const PropensityAmplitude& a_psi);

/// Conditions A on the outcome "the hidden state lies in revealed_cell":
/// amplitudes outside are zeroed and the rest rescaled to unit norm.
PropensityAmplitude bayesian_update(const PropensityAmplitude& a,
                                    const std::vector<std::size_t>& revealed_cell);

struct SharpenResult {
  std::size_t m = 1;
  double trace_distance_to_complete = 0.0;
};

/// Within-cell spread 1 - max_j |s_j|^2; 0 in the point-cell limit m = 1.
SharpenResult sharpen(const HiddenSpace& space, const Preparation& prep);

/// {"qdim": d, "smear": m, "values": [[re, im], ...]}
nlohmann::json to_json(const PropensityAmplitude& a);
PropensityAmplitude propensity_from_json(const nlohmann::json& j);

} // namespace onticlab
