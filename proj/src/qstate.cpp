#include "onticlab/qstate.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "onticlab/error.hpp"
#include "onticlab/rng.hpp"

namespace onticlab {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

} // namespace

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw InvalidArgument("StateVector: dimension must be at least 2");
  }
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (!std::isfinite(amps_(i).real()) || !std::isfinite(amps_(i).imag())) {
      throw InvalidArgument("StateVector: non-finite amplitude");
    }
  }
  const double n2 = amps_.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvalidArgument("StateVector: squared norm " + std::to_string(n2) + " is not 1");
  }
}

StateVector StateVector::normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("StateVector::normalized: zero or non-finite vector");
  }
  return StateVector(amplitudes / n);
}

StateVector StateVector::normalized(const std::vector<Complex>& amplitudes) {
  return normalized(CVector(Eigen::Map<const CVector>(amplitudes.data(),
                                                      static_cast<Eigen::Index>(amplitudes.size()))));
}

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw InvalidArgument("StateVector::basis: index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_bloch(double theta, double phi) {
  CVector v(2);
  v(0) = std::cos(theta / 2.0);
  v(1) = std::polar(std::sin(theta / 2.0), phi);
  return normalized(std::move(v));
}

StateVector StateVector::random(std::size_t dim, std::mt19937_64& rng) {
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal(rng);
  return normalized(std::move(v));
}

StateVector StateVector::random_qubit(std::mt19937_64& rng) {
  const double cos_theta = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  return from_bloch(std::acos(cos_theta), phi);
}

StateVector StateVector::with_phase(double alpha) const {
  return StateVector(amps_ * std::polar(1.0, alpha));
}

HermitianOperator::HermitianOperator(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw InvalidArgument("HermitianOperator: matrix must be square and non-empty");
  }
  const double err = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (!(err <= 1e-12)) {
    throw InvalidArgument("HermitianOperator: matrix is not Hermitian (residual " +
                          std::to_string(err) + ")");
  }
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& diag) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(diag.size()),
                            static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::random(std::size_t dim, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = complex_normal(rng);
  CMatrix h = 0.5 * (g + g.adjoint());
  return HermitianOperator(std::move(h));
}

HermitianOperator HermitianOperator::shifted(double c) const {
  CMatrix m = m_;
  m.diagonal().array() += c;
  return HermitianOperator(std::move(m));
}

void EvolutionParams::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner_product");
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

double overlap_sq(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

StateVector evolve(const StateVector& psi, const HermitianOperator& h,
                   const EvolutionParams& params) {
  require_same_dim(psi.dim(), h.dim(), "evolve");
  params.validate();
  if (h.dim() > kMaxExactDim) {
    throw InvalidArgument("evolve: dimension exceeds the exact eigendecomposition cap of 64");
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h.matrix());
  if (eig.info() != Eigen::Success) {
    throw NumericalError("evolve: eigendecomposition of H failed");
  }
  const CMatrix& v = eig.eigenvectors();
  CVector coeff = v.adjoint() * psi.amplitudes();
  const double scale = params.dt / params.hbar;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::polar(1.0, -eig.eigenvalues()(k) * scale);
  }
  return StateVector(v * coeff);
}

double energy_variance(const StateVector& psi, const HermitianOperator& h) {
  require_same_dim(psi.dim(), h.dim(), "energy_variance");
  const CVector& x = psi.amplitudes();
  const CVector hx = h.matrix() * x;
  const double mean = x.dot(hx).real();
  // ||(H - <H>) psi||^2 equals <H^2> - <H>^2 and cannot go negative.
  return (hx - mean * x).squaredNorm();
}

double fubini_study_dist2(const StateVector& a, const StateVector& b) {
  // For unit vectors 1 - |<a|b>|^2 = ||b - <a|b> a||^2; the right side keeps
  // full relative precision when the states are nearly parallel.
  const Complex ov = inner_product(a, b);
  const CVector perp = b.amplitudes() - ov * a.amplitudes();
  return 4.0 * perp.squaredNorm();
}

double evolution_speed(const StateVector& psi, const HermitianOperator& h,
                       const EvolutionParams& params) {
  params.validate();
  return 2.0 * std::sqrt(energy_variance(psi, h)) / params.hbar;
}

std::array<double, 3> bloch_vector(const StateVector& psi) {
  if (psi.dim() != 2) throw DimensionMismatch("bloch_vector: qubit state required");
  const Complex a = psi[0];
  const Complex b = psi[1];
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

} // namespace onticlab
