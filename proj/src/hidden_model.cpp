#include "onticlab/hidden_model.hpp"

#include <algorithm>
#include <cmath>

#include "onticlab/error.hpp"

namespace onticlab {

HiddenSpace::HiddenSpace(std::size_t qdim, std::size_t smear) : qdim_(qdim), smear_(smear) {
  if (qdim_ < 2) throw InvalidArgument("HiddenSpace: quantum dimension must be at least 2");
  if (smear_ < 1) throw InvalidArgument("HiddenSpace: smear must be at least 1");
}

std::vector<std::size_t> HiddenSpace::cell_of(std::size_t k) const {
  if (k >= qdim_) throw InvalidArgument("HiddenSpace::cell_of: basis index out of range");
  std::vector<std::size_t> cell(smear_);
  for (std::size_t j = 0; j < smear_; ++j) cell[j] = k * smear_ + j;
  return cell;
}

std::size_t HiddenSpace::owner_of(std::size_t lambda) const {
  if (lambda >= hdim()) throw InvalidArgument("HiddenSpace::owner_of: hidden index out of range");
  return lambda / smear_;
}

SmearProfile::SmearProfile(std::vector<Complex> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw InvalidArgument("SmearProfile: empty profile");
  double n2 = 0.0;
  for (const auto& s : w_) n2 += std::norm(s);
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvalidArgument("SmearProfile: squared weights must sum to 1");
  }
}

SmearProfile SmearProfile::uniform(std::size_t m) {
  if (m == 0) throw InvalidArgument("SmearProfile::uniform: m must be positive");
  return SmearProfile(std::vector<Complex>(m, Complex(1.0 / std::sqrt(static_cast<double>(m)))));
}

SmearProfile SmearProfile::gaussian(std::size_t m, double width) {
  if (m == 0) throw InvalidArgument("SmearProfile::gaussian: m must be positive");
  if (!(width > 0.0)) throw InvalidArgument("SmearProfile::gaussian: width must be positive");
  const double centre = 0.5 * static_cast<double>(m - 1);
  std::vector<Complex> w(m);
  double n2 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double x = static_cast<double>(j) - centre;
    const double a = std::exp(-x * x / (4.0 * width * width));
    w[j] = a;
    n2 += a * a;
  }
  const double n = std::sqrt(n2);
  for (auto& s : w) s /= n;
  return SmearProfile(std::move(w));
}

PropensityAmplitude::PropensityAmplitude(HiddenSpace space, CVector values)
    : space_(space), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != space_.hdim()) {
    throw DimensionMismatch("PropensityAmplitude: length does not match hidden dimension");
  }
  const double n2 = values_.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvalidArgument("PropensityAmplitude: sum of |A|^2 must be 1");
  }
}

std::vector<std::size_t> PropensityAmplitude::support() const {
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (values_(i) != Complex(0.0)) idx.push_back(static_cast<std::size_t>(i));
  }
  return idx;
}

PropensityAmplitude prepare(const Preparation& prep, const HiddenSpace& space) {
  if (prep.target.dim() != space.qdim()) {
    throw DimensionMismatch("prepare: target dimension does not match the hidden space");
  }
  if (prep.profile.size() != space.smear()) {
    throw DimensionMismatch("prepare: profile length does not match the smear");
  }
  const std::size_t m = space.smear();
  CVector a(static_cast<Eigen::Index>(space.hdim()));
  for (std::size_t k = 0; k < space.qdim(); ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      a(static_cast<Eigen::Index>(k * m + j)) = prep.target[k] * prep.profile.weights()[j];
    }
  }
  return PropensityAmplitude(space, std::move(a));
}

StateVector reconstruct(const PropensityAmplitude& a) {
  // The hidden basis is the standard basis of C^hdim, so the sum over
  // |lambda> A(lambda) is the coefficient vector itself.
  const double n2 = a.values().squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvalidArgument("reconstruct: propensity amplitude is not normalized");
  }
  return StateVector(a.values());
}

StateVector embed(const StateVector& psi, const HiddenSpace& space, const SmearProfile& profile) {
  return reconstruct(prepare(Preparation{"embed", psi, profile}, space));
}

CVector project(const StateVector& hidden, const HiddenSpace& space, const SmearProfile& profile) {
  if (hidden.dim() != space.hdim()) throw DimensionMismatch("project: wrong hidden dimension");
  if (profile.size() != space.smear()) throw DimensionMismatch("project: wrong profile length");
  const std::size_t m = space.smear();
  CVector c = CVector::Zero(static_cast<Eigen::Index>(space.qdim()));
  for (std::size_t k = 0; k < space.qdim(); ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      c(static_cast<Eigen::Index>(k)) += std::conj(profile.weights()[j]) * hidden[k * m + j];
    }
  }
  return c;
}

double transition_probability(const PropensityAmplitude& a_phi,
                              const PropensityAmplitude& a_psi) {
  if (!(a_phi.space() == a_psi.space())) {
    throw DimensionMismatch("transition_probability: amplitudes live in different hidden spaces");
  }
  Complex amp = 0.0;
  for (std::size_t i = 0; i < a_phi.space().hdim(); ++i) {
    const Complex x = a_phi[i];
    const Complex y = a_psi[i];
    if (x != Complex(0.0) && y != Complex(0.0)) amp += std::conj(x) * y;
  }
  return std::min(1.0, std::norm(amp));
}

PropensityAmplitude bayesian_update(const PropensityAmplitude& a,
                                    const std::vector<std::size_t>& revealed_cell) {
  const std::size_t n = a.space().hdim();
  std::vector<bool> keep(n, false);
  for (std::size_t lambda : revealed_cell) {
    if (lambda >= n) throw InvalidArgument("bayesian_update: revealed index out of range");
    keep[lambda] = true;
  }
  CVector post = CVector::Zero(static_cast<Eigen::Index>(n));
  double weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) {
      post(static_cast<Eigen::Index>(i)) = a[i];
      weight += a.probability(i);
    }
  }
  if (!(weight > 0.0)) {
    throw InvalidArgument("bayesian_update: revealed cell has zero posterior weight");
  }
  // Already normalized: return the input untouched so repeated updates are exact.
  if (post == a.values()) return a;
  post /= std::sqrt(weight);
  return PropensityAmplitude(a.space(), std::move(post));
}

SharpenResult sharpen(const HiddenSpace& space, const Preparation& prep) {
  if (prep.profile.size() != space.smear()) {
    throw DimensionMismatch("sharpen: profile length does not match the smear");
  }
  double peak = 0.0;
  for (const auto& s : prep.profile.weights()) peak = std::max(peak, std::norm(s));
  const double spread = space.smear() == 1 ? 0.0 : 1.0 - peak;
  return {space.smear(), std::max(0.0, spread)};
}

nlohmann::json to_json(const PropensityAmplitude& a) {
  nlohmann::json values = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.values().size(); ++i) {
    values.push_back({a.values()(i).real(), a.values()(i).imag()});
  }
  return {{"qdim", a.space().qdim()}, {"smear", a.space().smear()}, {"values", values}};
}

PropensityAmplitude propensity_from_json(const nlohmann::json& j) {
  try {
    HiddenSpace space(j.at("qdim").get<std::size_t>(), j.at("smear").get<std::size_t>());
    const auto& vals = j.at("values");
    if (!vals.is_array() || vals.size() != space.hdim()) {
      throw InvalidArgument("propensity_from_json: 'values' must hold qdim*smear entries");
    }
    CVector a(static_cast<Eigen::Index>(space.hdim()));
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const auto& pair = vals[i];
      if (!pair.is_array() || pair.size() != 2) {
        throw InvalidArgument("propensity_from_json: each value must be [re, im]");
      }
      a(static_cast<Eigen::Index>(i)) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return PropensityAmplitude(space, std::move(a));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("propensity_from_json: ") + e.what());
  }
}

} // namespace onticlab
