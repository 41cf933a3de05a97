#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "onticlab/error.hpp"
#include "onticlab/qstate.hpp"

using namespace onticlab;

namespace {

const double kPi = std::numbers::pi;

StateVector plus() { return StateVector::normalized(std::vector<Complex>{1.0, 1.0}); }
HermitianOperator sigma_z() { return HermitianOperator::diagonal({1.0, -1.0}); }

// Oracle for exp(-i H t): Taylor series with scaling and squaring. Shares
// nothing with the eigendecomposition path in evolve().
CMatrix taylor_propagator(const CMatrix& h, double t) {
  const Complex minus_i(0.0, -1.0);
  CMatrix a = minus_i * t * h;
  int squarings = 0;
  while (a.cwiseAbs().sum() > 0.5) {
    a /= 2.0;
    ++squarings;
  }
  CMatrix sum = CMatrix::Identity(h.rows(), h.cols());
  CMatrix term = sum;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

} // namespace

TEST_CASE("state construction validates norm and dimension") {
  CHECK_THROWS_AS(StateVector(CVector::Ones(2)), InvalidArgument);
  CHECK_THROWS_AS(StateVector::normalized(std::vector<Complex>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(StateVector::normalized(CVector::Zero(3)), InvalidArgument);
  CHECK_THROWS_AS(StateVector::basis(2, 2), InvalidArgument);
  CHECK(StateVector::basis(3, 1)[1] == Complex(1.0));
}

TEST_CASE("hermitian operator rejects non-hermitian input") {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(HermitianOperator{m}, InvalidArgument);
  CHECK_THROWS_AS(HermitianOperator{CMatrix::Zero(2, 3)}, InvalidArgument);
}

TEST_CASE("inner product") {
  std::mt19937_64 rng(7);
  const auto a = StateVector::random(4, rng);
  const auto b = StateVector::random(4, rng);

  CHECK(std::abs(inner_product(a, a) - Complex(1.0)) < 1e-14);
  CHECK(std::abs(inner_product(StateVector::basis(2, 0), StateVector::basis(2, 1))) == 0.0);
  // sum conj(a_i) b_i = (1/sqrt2)*1 + (1/sqrt2)*0
  CHECK(std::abs(inner_product(plus(), StateVector::basis(2, 0)) - Complex(1.0 / std::sqrt(2.0))) <
        1e-15);
  CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-15);
  CHECK_THROWS_AS(inner_product(a, StateVector::basis(2, 0)), DimensionMismatch);
}

TEST_CASE("evolve") {
  SUBCASE("zero hamiltonian is the identity") {
    std::mt19937_64 rng(3);
    const auto psi = StateVector::random(3, rng);
    const auto out = evolve(psi, HermitianOperator::diagonal({0, 0, 0}), {1.0, 0.7});
    CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-15);
  }
  SUBCASE("sigma_z at dt = pi/2 maps |+> to an orthogonal state") {
    const auto out = evolve(plus(), sigma_z(), {1.0, kPi / 2});
    CHECK(overlap_sq(out, plus()) < 1e-30 + 1e-15);
    // overlap cos^2(dt) for general dt
    for (double dt : {0.1, 0.5, 1.3, 2.9}) {
      CHECK(overlap_sq(evolve(plus(), sigma_z(), {1.0, dt}), plus()) ==
            doctest::Approx(std::cos(dt) * std::cos(dt)).epsilon(1e-13));
    }
  }
  SUBCASE("eigenstates are stationary") {
    const auto out = evolve(StateVector::basis(2, 1), sigma_z(), {1.0, 0.37});
    CHECK(fubini_study_dist2(out, StateVector::basis(2, 1)) < 1e-28);
  }
  SUBCASE("matches the Taylor-series propagator for random H") {
    std::mt19937_64 rng(11);
    for (std::size_t d : {2u, 3u, 5u, 8u}) {
      const auto h = HermitianOperator::random(d, rng);
      const auto psi = StateVector::random(d, rng);
      const EvolutionParams p{0.8, 0.45};
      const CVector expected = taylor_propagator(h.matrix(), p.dt / p.hbar) * psi.amplitudes();
      CHECK((evolve(psi, h, p).amplitudes() - expected).norm() < 1e-12);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(evolve(plus(), HermitianOperator::diagonal({1, 2, 3}), {}), DimensionMismatch);
    CHECK_THROWS_AS(evolve(plus(), sigma_z(), {0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(evolve(plus(), sigma_z(), {1.0, -1.0}), InvalidArgument);
    std::mt19937_64 rng(1);
    const std::size_t big = kMaxExactDim + 1;
    CHECK_THROWS_AS(evolve(StateVector::random(big, rng), HermitianOperator::random(big, rng), {}),
                    InvalidArgument);
  }
}

TEST_CASE("unitarity over 1000 composed steps") {
  std::mt19937_64 rng(5);
  const auto h = HermitianOperator::random(4, rng);
  auto psi = StateVector::random(4, rng);
  for (int i = 0; i < 1000; ++i) psi = evolve(psi, h, {1.0, 0.01});
  CHECK(std::abs(psi.amplitudes().squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("energy variance") {
  CHECK(energy_variance(StateVector::basis(2, 0), sigma_z()) == 0.0);
  // <H> = 0 and <H^2> = 1
  CHECK(energy_variance(plus(), sigma_z()) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    CHECK(energy_variance(StateVector::random(2, rng), HermitianOperator::diagonal({2.5, 2.5})) <
          1e-28);
  }
  SUBCASE("invariant under H -> H + c I") {
    for (int i = 0; i < 20; ++i) {
      const auto h = HermitianOperator::random(3, rng);
      const auto psi = StateVector::random(3, rng);
      const double c = 20.0 * (static_cast<double>(rng() % 1000) / 1000.0 - 0.5);
      CHECK(std::abs(energy_variance(psi, h.shifted(c)) - energy_variance(psi, h)) < 1e-10);
    }
  }
  SUBCASE("agrees with <H^2> - <H>^2") {
    for (int i = 0; i < 20; ++i) {
      const auto h = HermitianOperator::random(4, rng);
      const auto psi = StateVector::random(4, rng);
      const CVector x = psi.amplitudes();
      const double mean = x.dot(h.matrix() * x).real();
      const double second = x.dot(h.matrix() * h.matrix() * x).real();
      CHECK(energy_variance(psi, h) == doctest::Approx(second - mean * mean).epsilon(1e-10));
      CHECK(energy_variance(psi, h) >= 0.0);
    }
  }
}

TEST_CASE("Fubini-Study distance") {
  std::mt19937_64 rng(13);
  const auto a = StateVector::random(3, rng);
  const auto b = StateVector::random(3, rng);
  CHECK(fubini_study_dist2(a, a.with_phase(1.234)) < 1e-28);
  CHECK(fubini_study_dist2(StateVector::basis(2, 0), StateVector::basis(2, 1)) == 4.0);

  SUBCASE("phase gauge") {
    for (int i = 0; i < 20; ++i) {
      const double alpha = 2.0 * kPi * static_cast<double>(rng() % 100000) / 100000.0;
      CHECK(fubini_study_dist2(a.with_phase(alpha), b) ==
            doctest::Approx(fubini_study_dist2(a, b)).epsilon(1e-14));
    }
  }
  SUBCASE("dt = 1e-3 on |+> under sigma_z") {
    // exact: 4 (1 - cos^2 dt) = 4 sin^2 dt ~ 4e-6
    const double dt = 1e-3;
    const double d2 = fubini_study_dist2(plus(), evolve(plus(), sigma_z(), {1.0, dt}));
    CHECK(d2 == doctest::Approx(4.0 * std::sin(dt) * std::sin(dt)).epsilon(1e-10));
    CHECK(std::abs(d2 - 4e-6) / 4e-6 < 1e-5);
  }
}

TEST_CASE("evolution speed") {
  CHECK(evolution_speed(StateVector::basis(2, 0), sigma_z(), {}) == 0.0);
  CHECK(evolution_speed(plus(), sigma_z(), {1.0, 1e-3}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(evolution_speed(plus(), sigma_z(), {2.0, 1e-3}) == doctest::Approx(1.0).epsilon(1e-15));

  SUBCASE("speed * dt tracks the Fubini-Study step") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10; ++i) {
      const auto h = HermitianOperator::random(2, rng);
      const auto psi = StateVector::random(2, rng);
      for (double dt : {1e-3, 1e-4}) {
        const double step = std::sqrt(fubini_study_dist2(psi, evolve(psi, h, {1.0, dt})));
        const double v = evolution_speed(psi, h, {1.0, dt});
        CHECK(std::abs(step - v * dt) <= 10.0 * dt * dt);
      }
    }
  }
}

TEST_CASE("small-dt law: dD^2 - 4 dt^2 dH^2 is O(dt^4)") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = HermitianOperator::random(2, rng);
    const auto psi = StateVector::random(2, rng);
    const double var = energy_variance(psi, h);
    double worst_c = 0.0;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
      const double d2 = fubini_study_dist2(psi, evolve(psi, h, {1.0, dt}));
      const double resid = std::abs(d2 - 4.0 * dt * dt * var);
      worst_c = std::max(worst_c, resid / std::pow(dt, 4));
    }
    // the dt^4 coefficient is bounded by a few powers of ||H||
    const double scale = std::pow(h.matrix().norm(), 4);
    CHECK(worst_c <= 4.0 * scale);
  }
}

TEST_CASE("bloch vector") {
  const auto n = bloch_vector(plus());
  CHECK(n[0] == doctest::Approx(1.0));
  CHECK(std::abs(n[1]) < 1e-15);
  CHECK(std::abs(n[2]) < 1e-15);
  const auto s = StateVector::from_bloch(0.7, 2.1);
  const auto m = bloch_vector(s);
  CHECK(m[0] == doctest::Approx(std::sin(0.7) * std::cos(2.1)));
  CHECK(m[1] == doctest::Approx(std::sin(0.7) * std::sin(2.1)));
  CHECK(m[2] == doctest::Approx(std::cos(0.7)));
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(bloch_vector(StateVector::random(3, rng)), DimensionMismatch);
}
