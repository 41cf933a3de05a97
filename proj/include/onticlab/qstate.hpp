#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace onticlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Norm tolerance every StateVector is held to.
inline constexpr double kNormTolerance = 1e-12;
/// Largest dimension accepted by the eigendecomposition paths.
inline constexpr std::size_t kMaxExactDim = 64;

/// Unit-norm ray representative in C^d, d >= 2. Immutable.
///
/// The global phase is kept as given; compare states only through
/// phase-invariant functionals (overlap modulus, Fubini-Study distance).
class StateVector {
public:
  /// Validates |amps| == 1 within kNormTolerance and dim >= 2.
  explicit StateVector(CVector amplitudes);

  /// Rescales `amplitudes` to unit norm. Rejects the zero vector.
  static StateVector normalized(CVector amplitudes);
  static StateVector normalized(const std::vector<Complex>& amplitudes);
  /// Computational basis vector |k> in dimension `dim`.
  static StateVector basis(std::size_t dim, std::size_t k);
  /// Qubit with Bloch angles (theta, phi): cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  static StateVector from_bloch(double theta, double phi);
  /// Haar-random state.
  static StateVector random(std::size_t dim, std::mt19937_64& rng);
  /// Qubit drawn uniformly on the Bloch sphere.
  static StateVector random_qubit(std::mt19937_64& rng);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  /// e^{i alpha} |this>.
  StateVector with_phase(double alpha) const;

private:
  CVector amps_;
};

/// Hermitian matrix; entries checked against their conjugate transpose to 1e-12.
class HermitianOperator {
public:
  explicit HermitianOperator(CMatrix entries);

  static HermitianOperator diagonal(const std::vector<double>& diag);
  /// GUE-like random Hermitian matrix with unit-scale entries.
  static HermitianOperator random(std::size_t dim, std::mt19937_64& rng);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }

  /// this + c * I
  HermitianOperator shifted(double c) const;

private:
  CMatrix m_;
};

struct EvolutionParams {
  double hbar = 1.0;
  double dt = 1e-3;

  /// Throws InvalidArgument unless hbar > 0 and dt > 0.
  void validate() const;
};

/// <a|b> = sum_i conj(a_i) b_i
Complex inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>|^2
double overlap_sq(const StateVector& a, const StateVector& b);

/// exp(-i H dt / hbar) |psi>, through the eigendecomposition of H.
StateVector evolve(const StateVector& psi, const HermitianOperator& h,
                   const EvolutionParams& params);

/// <H^2> - <H>^2, clamped at 0 when the rounding residue is within 1e-12.
double energy_variance(const StateVector& psi, const HermitianOperator& h);

/// dD^2 = 4 (1 - |<a|b>|^2).
double fubini_study_dist2(const StateVector& a, const StateVector& b);

/// v = 2 Delta H / hbar
double evolution_speed(const StateVector& psi, const HermitianOperator& h,
                       const EvolutionParams& params);

/// Bloch vector (<sigma_x>, <sigma_y>, <sigma_z>) of a qubit.
std::array<double, 3> bloch_vector(const StateVector& psi);

} // namespace onticlab
