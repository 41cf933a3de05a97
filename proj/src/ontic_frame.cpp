#include "onticlab/ontic_frame.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "onticlab/error.hpp"
#include "onticlab/format.hpp"
#include "onticlab/summation.hpp"

namespace onticlab {

namespace {

std::array<double, 3> unit_vector(const OnticPoint& p) {
  const double st = std::sin(p.theta);
  return {st * std::cos(p.phi), st * std::sin(p.phi), std::cos(p.theta)};
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (a == b) return;
  if (!a || !b || !a->same_as(*b)) {
    throw GridMismatch(std::string(what) + ": tables live on different grids");
  }
}

void require_qubit_sphere(const StateVector& s, const GridPtr& grid, const char* what) {
  if (s.dim() != 2) throw DimensionMismatch(std::string(what) + ": qubit state required");
  if (!grid) throw InvalidArgument(std::string(what) + ": null grid");
}

} // namespace

OnticGrid::OnticGrid(std::vector<OnticPoint> points, std::vector<double> weights,
                     double total_measure, std::vector<CellBounds> cells)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      cells_(std::move(cells)),
      total_measure_(total_measure) {
  if (points_.empty()) throw InvalidArgument("OnticGrid: no points");
  if (points_.size() != weights_.size()) {
    throw InvalidArgument("OnticGrid: points and weights differ in length");
  }
  if (!cells_.empty() && cells_.size() != points_.size()) {
    throw InvalidArgument("OnticGrid: cells and points differ in length");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("OnticGrid: weights must be positive");
  }
  const double sum = pairwise_sum(weights_);
  if (std::abs(sum - total_measure_) > 1e-10) {
    throw InvalidArgument("OnticGrid: weights sum to " + format_double(sum) +
                          ", expected total measure " + format_double(total_measure_));
  }
  dirs_.reserve(points_.size());
  for (const auto& p : points_) dirs_.push_back(unit_vector(p));
}

std::shared_ptr<const OnticGrid> OnticGrid::sphere(std::size_t n_theta, std::size_t n_phi) {
  if (n_theta == 0 || n_phi == 0) throw InvalidArgument("OnticGrid::sphere: empty resolution");
  const double pi = std::numbers::pi;
  const double dtheta = pi / static_cast<double>(n_theta);
  const double dphi = 2.0 * pi / static_cast<double>(n_phi);

  std::vector<OnticPoint> pts;
  std::vector<double> w;
  std::vector<CellBounds> cells;
  pts.reserve(n_theta * n_phi);
  w.reserve(n_theta * n_phi);
  cells.reserve(n_theta * n_phi);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double lo = dtheta * static_cast<double>(i);
    const double hi = dtheta * static_cast<double>(i + 1);
    const double theta = 0.5 * (lo + hi);
    // cos(lo) - cos(hi) written without cancellation.
    const double band = 2.0 * std::sin(theta) * std::sin(0.5 * dtheta);
    for (std::size_t j = 0; j < n_phi; ++j) {
      pts.push_back({theta, dphi * (static_cast<double>(j) + 0.5)});
      w.push_back(band * dphi);
      cells.push_back({lo, hi, dphi * static_cast<double>(j), dphi * static_cast<double>(j + 1)});
    }
  }
  return std::make_shared<const OnticGrid>(std::move(pts), std::move(w), 4.0 * pi,
                                           std::move(cells));
}

bool OnticGrid::same_as(const OnticGrid& other) const noexcept {
  if (this == &other) return true;
  if (count() != other.count() || weights_ != other.weights_) return false;
  for (std::size_t i = 0; i < count(); ++i) {
    if (points_[i].theta != other.points_[i].theta || points_[i].phi != other.points_[i].phi) {
      return false;
    }
  }
  return true;
}

EpistemicDistribution::EpistemicDistribution(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("EpistemicDistribution: null grid");
  if (values_.size() != grid_->count()) {
    throw InvalidArgument("EpistemicDistribution: length does not match grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("EpistemicDistribution: densities must be finite and nonnegative");
    }
  }
}

ResponseFunction::ResponseFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("ResponseFunction: null grid");
  if (values_.size() != grid_->count()) {
    throw InvalidArgument("ResponseFunction: length does not match grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("ResponseFunction: values must lie in [0,1]");
  }
}

double born_integral(const ResponseFunction& xi, const EpistemicDistribution& mu,
                     unsigned workers) {
  require_same_grid(xi.grid(), mu.grid(), "born_integral");
  const auto& w = mu.grid()->weights();
  const auto& x = xi.values();
  const auto& m = mu.values();
  return deterministic_sum(
      w.size(), [&](std::size_t i) { return w[i] * x[i] * m[i]; }, workers);
}

double check_normalization(const EpistemicDistribution& mu, unsigned workers) {
  const auto& w = mu.grid()->weights();
  const auto& m = mu.values();
  return deterministic_sum(
      w.size(), [&](std::size_t i) { return w[i] * m[i]; }, workers);
}

double hemisphere_fraction(const std::array<double, 3>& n, const OnticGrid& grid, std::size_t i) {
  const double c = dot(n, grid.direction(i));
  if (!grid.has_cells()) return c > 0.0 ? 1.0 : 0.0;

  const CellBounds& cb = grid.cell(i);
  // n . lambda is 1-Lipschitz in angular distance, and no point of the cell
  // is farther from the centre than half the coordinate diagonal.
  const double radius = 0.5 * std::hypot(cb.theta_hi - cb.theta_lo, cb.phi_hi - cb.phi_lo);
  if (c > radius * (1.0 + 1e-9)) return 1.0;
  if (c < -radius * (1.0 + 1e-9)) return 0.0;

  // n . lambda = R sin(theta) cos(phi - alpha) + n_z cos(theta); for each
  // theta strip the positive set in phi is an arc centred on alpha.
  constexpr int kStrips = 256;
  const double r_xy = std::hypot(n[0], n[1]);
  const double alpha = std::atan2(n[1], n[0]);
  const double two_pi = 2.0 * std::numbers::pi;
  const double width = cb.phi_hi - cb.phi_lo;
  double inside = 0.0;
  double total = 0.0;
  for (int s = 0; s < kStrips; ++s) {
    const double tl = cb.theta_lo + (cb.theta_hi - cb.theta_lo) * s / kStrips;
    const double th = cb.theta_lo + (cb.theta_hi - cb.theta_lo) * (s + 1) / kStrips;
    const double t = 0.5 * (tl + th);
    const double strip = 2.0 * std::sin(t) * std::sin(0.5 * (th - tl));
    const double st = std::sin(t);
    const double ct = std::cos(t);

    double len = 0.0;
    if (r_xy * st <= 1e-300) {
      len = n[2] * ct > 0.0 ? width : 0.0;
    } else {
      const double cut = -n[2] * ct / (r_xy * st);
      if (cut < -1.0) {
        len = width;
      } else if (cut < 1.0) {
        const double half = std::acos(cut);
        for (int k = -2; k <= 2; ++k) {
          const double lo = alpha - half + two_pi * k;
          const double hi = alpha + half + two_pi * k;
          len += std::max(0.0, std::min(hi, cb.phi_hi) - std::max(lo, cb.phi_lo));
        }
      }
    }
    inside += strip * std::min(len, width);
    total += strip * width;
  }
  return std::clamp(inside / total, 0.0, 1.0);
}

EpistemicDistribution ks_distribution(const StateVector& psi, const GridPtr& grid) {
  require_qubit_sphere(psi, grid, "ks_distribution");
  const auto n = bloch_vector(psi);
  std::vector<double> mu(grid->count());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double c = dot(n, grid->direction(i));
    mu[i] = c > 0.0 && hemisphere_fraction(n, *grid, i) == 1.0 ? c / std::numbers::pi : 0.0;
  }
  EpistemicDistribution raw(grid, std::move(mu));
  const double z = check_normalization(raw);
  if (!(z > 0.0)) throw NumericalError("ks_distribution: grid misses the support of mu");
  std::vector<double> scaled = raw.values();
  for (double& v : scaled) v /= z;
  return EpistemicDistribution(grid, std::move(scaled));
}

ResponseFunction ks_response(const StateVector& phi, const GridPtr& grid) {
  require_qubit_sphere(phi, grid, "ks_response");
  const auto n = bloch_vector(phi);
  std::vector<double> xi(grid->count());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = hemisphere_fraction(n, *grid, i);
  return ResponseFunction(grid, std::move(xi));
}

OntologicalModel make_ks_model(const GridPtr& grid) {
  OntologicalModel m;
  m.name = "kochen-specker";
  m.grid = grid;
  m.dim = 2;
  m.mu_of = [grid](const StateVector& s) { return ks_distribution(s, grid); };
  m.xi_of = [grid](const StateVector& s) { return ks_response(s, grid); };
  m.quadrature_tolerance = 1e-4;
  return m;
}

std::vector<std::size_t> support(const EpistemicDistribution& mu, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("support: threshold must be nonnegative");
  std::vector<std::size_t> idx;
  const auto& v = mu.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > threshold) idx.push_back(i);
  }
  return idx;
}

std::vector<std::size_t> overlap_region(const EpistemicDistribution& mu1,
                                        const EpistemicDistribution& mu2) {
  require_same_grid(mu1.grid(), mu2.grid(), "overlap_region");
  std::vector<std::size_t> idx;
  const auto& a = mu1.values();
  const auto& b = mu2.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0 && b[i] > 0.0) idx.push_back(i);
  }
  return idx;
}

FrozenResponse frozen_response_test(const StateVector& psi, const HermitianOperator& h,
                                    const EvolutionParams& params,
                                    const OntologicalModel& model, unsigned workers) {
  if (psi.dim() != model.dim) {
    throw DimensionMismatch("frozen_response_test: model built for dimension " +
                            std::to_string(model.dim));
  }
  const StateVector later = evolve(psi, h, params);
  const EpistemicDistribution mu_now = model.mu_of(psi);

  FrozenResponse r;
  // d^n xi = 0: the response of psi(t) stands in for that of psi(t+dt).
  r.frozen_integral = born_integral(model.xi_of(psi), mu_now, workers);
  r.updated_integral = born_integral(model.xi_of(later), mu_now, workers);
  r.born_value = overlap_sq(later, psi);
  r.deficit = r.frozen_integral - r.born_value;
  return r;
}

void write_model_csv(std::ostream& out, const EpistemicDistribution& mu,
                     const ResponseFunction& xi) {
  require_same_grid(mu.grid(), xi.grid(), "write_model_csv");
  const OnticGrid& g = *mu.grid();
  out << "theta,phi,weight,mu,xi\n";
  for (std::size_t i = 0; i < g.count(); ++i) {
    out << format_double(g.points()[i].theta) << ',' << format_double(g.points()[i].phi) << ','
        << format_double(g.weights()[i]) << ',' << format_double(mu.values()[i]) << ','
        << format_double(xi.values()[i]) << '\n';
  }
}

ModelTable read_model_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("read_model_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta,phi,weight,mu,xi") {
    throw InvalidArgument("read_model_csv: unexpected header '" + line + "'");
  }

  std::vector<OnticPoint> pts;
  std::vector<double> w, mu, xi;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 5> f{};
    std::size_t pos = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::size_t end = k + 1 < f.size() ? line.find(',', pos) : line.size();
      if (end == std::string::npos) {
        throw InvalidArgument("read_model_csv: line " + std::to_string(lineno) +
                              ": expected 5 fields");
      }
      auto v = parse_double(std::string_view(line).substr(pos, end - pos));
      if (!v) {
        throw InvalidArgument("read_model_csv: line " + std::to_string(lineno) +
                              ": bad number in field " + std::to_string(k + 1));
      }
      f[k] = *v;
      pos = end + 1;
    }
    pts.push_back({f[0], f[1]});
    w.push_back(f[2]);
    mu.push_back(f[3]);
    xi.push_back(f[4]);
  }
  const double total = pairwise_sum(w);
  auto grid = std::make_shared<const OnticGrid>(std::move(pts), std::move(w), total);
  return ModelTable{grid, EpistemicDistribution(grid, std::move(mu)),
                    ResponseFunction(grid, std::move(xi))};
}

} // namespace onticlab
