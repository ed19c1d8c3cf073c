#include <doctest.h>

#include <cmath>
#include <numbers>

#include "causalnm/families.hpp"
#include "causalnm/pdm.hpp"
#include "oracles.hpp"

using namespace causalnm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("qubit states") {
  const auto zero = QubitState::pure(kPi / 2);
  CHECK(zero.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(QubitState::pure(0.0).matrix()(1, 1).real() == doctest::Approx(1.0));
  REQUIRE(zero.bloch_angles().has_value());
  CHECK(zero.bloch_angles()->theta == doctest::Approx(kPi / 2));
  CHECK_FALSE(QubitState::maximally_mixed().bloch_angles().has_value());

  oracle::Random rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = rng.uniform(0, kPi / 2), phi = rng.uniform(0, 2 * kPi);
    const auto a = QubitState::pure(theta, phi).matrix();
    const auto b = QubitState::orthogonal_partner(theta, phi).matrix();
    CHECK(std::abs((a * b).trace()) < 1e-15);
    CHECK(max_abs_diff(a + b, ComplexMatrix::identity(2)) < 1e-15);
  }

  CHECK_THROWS_AS(QubitState(ComplexMatrix::identity(2)), std::invalid_argument);
  CHECK_THROWS_AS(QubitState(ComplexMatrix::identity(4) * cplx(0.25)), std::invalid_argument);
  CHECK_THROWS_AS(QubitState(ComplexMatrix{{1.2, 0}, {0, -0.2}}), std::invalid_argument);
}

TEST_CASE("identity channel on the maximally mixed state") {
  const auto p = pdm_two_point(QubitState::maximally_mixed(), KrausChannel::identity(2));
  CHECK(max_abs_diff(p.matrix(), oracle::swap_by_hand() * cplx(0.5)) < 1e-15);
  const double expected[] = {-0.5, 0.5, 0.5, 0.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p.spectrum().eigenvalues[i] - expected[i]) < 1e-12);
  CHECK(causality_F(p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f_cm(p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_causal(p));
  CHECK(max_abs_diff(swap_operator(), oracle::swap_by_hand()) < 1e-15);
}

TEST_CASE("amplitude damping PDM for the ground state") {
  for (double r : {0.0, 0.19, 0.5, 0.9, 1.0}) {
    const auto p = pdm_two_point(QubitState::pure(kPi / 2), amplitude_damping(r));
    const double s = std::sqrt(1.0 - r);
    const ComplexMatrix expected{{1, 0, 0, 0}, {0, 0, s / 2, 0}, {0, s / 2, 0, 0}, {0, 0, 0, 0}};
    CHECK(max_abs_diff(p.matrix(), expected) < 1e-15);
    const double eig[] = {-s / 2, 0.0, s / 2, 1.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p.spectrum().eigenvalues[i] - eig[i]) < 1e-12);
    CHECK(causality_F(p) == doctest::Approx(std::log2(1.0 + s)).epsilon(1e-12));
    CHECK(is_causal(p) == (r < 1.0));
  }
}

TEST_CASE("generalized amplitude damping PDM and its closed forms") {
  for (double p : {0.0, 0.3, 1.0})
    for (double l : {0.0, 0.4, 0.95}) {
      const auto pdm = pdm_two_point(QubitState::pure(kPi / 2), generalized_amplitude_damping(p, l));
      const double s = std::sqrt(1.0 - l);
      const ComplexMatrix expected{{1 - p * l, 0, 0, 0}, {0, p * l, s / 2, 0}, {0, s / 2, 0, 0}, {0, 0, 0, 0}};
      CHECK(max_abs_diff(pdm.matrix(), expected) < 1e-15);
      const double root = std::sqrt(1 - l + l * l * p * p);
      std::vector<double> h{0.0, 1 - l * p, 0.5 * (l * p + root), 0.5 * (l * p - root)};
      std::sort(h.begin(), h.end());
      for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(pdm.spectrum().eigenvalues[i] - h[i]) < 1e-12);
      const double x = std::sqrt(l * l * p * p * (l * (l * p * p - 1) + 1));
      const double y = l * (2 * l * p * p - 1);
      const double z = std::sqrt((l * p - 1) * (l * p - 1));
      const double closed = std::log2(std::sqrt(1 + 2 * x + y) + std::sqrt(std::max(0.0, 1 - 2 * x + y)) + 2 * z) - 1;
      CHECK(causality_F(pdm) == doctest::Approx(closed).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("correlator and Jordan-product constructions agree") {
  oracle::Random rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = rng.state();
    const auto ch = rng.channel(1 + trial % 4);
    const auto jordan = pdm_two_point(rho, ch);
    CHECK(max_abs_diff(jordan.matrix(), pdm_from_correlators(rho, ch).matrix()) < 1e-12);
    CHECK(max_abs_diff(jordan.matrix(), oracle::correlator_pdm(rho.matrix(), ch)) < 1e-12);
    CHECK(std::abs(jordan.matrix().trace() - 1.0) < 1e-13);
    CHECK(jordan.matrix().is_hermitian(1e-14));
    const auto reference = oracle::jacobi_eigenvalues(jordan.matrix());
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(jordan.spectrum().eigenvalues[i] - reference[i]) < 1e-11);
    CHECK(max_abs_diff(jordan.marginal(0), rho.matrix()) < 1e-13);
    CHECK(max_abs_diff(jordan.marginal(1), ch.map(rho.matrix())) < 1e-13);
    CHECK(causality_F(jordan) == doctest::Approx(std::log2(1.0 + f_cm(jordan))).epsilon(1e-12));
  }
}

TEST_CASE("three-event PDM") {
  oracle::Random rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = rng.state();
    const std::vector<KrausChannel> chain{rng.channel(2), rng.channel(3)};
    const auto p = pdm_k_point(rho, chain);
    CHECK(p.events() == 3);
    CHECK(p.matrix().dim() == 8);
    CHECK(std::abs(p.matrix().trace() - 1.0) < 1e-13);
    CHECK(p.matrix().is_hermitian(1e-13));
    CHECK(max_abs_diff(p.marginal(0), rho.matrix()) < 1e-13);
    CHECK(max_abs_diff(p.marginal(1), chain[0].map(rho.matrix())) < 1e-13);
    CHECK(max_abs_diff(p.marginal(2), chain[1].map(chain[0].map(rho.matrix()))) < 1e-13);
    // Dropping the middle measurement, sigma_i then sigma_j equals the
    // two-event correlator through the composed channel.
    const std::size_t skip_middle[] = {1, 0, 3};
    const std::size_t two_event[] = {1, 3};
    const std::vector<KrausChannel> composed{compose(chain[1], chain[0])};
    CHECK(sequential_correlator(rho, chain, skip_middle) ==
          doctest::Approx(sequential_correlator(rho, composed, two_event)).epsilon(1e-12));
  }
  const std::vector<KrausChannel> single{KrausChannel::identity(2)};
  CHECK(max_abs_diff(pdm_k_point(QubitState::maximally_mixed(), single).matrix(),
                     pdm_two_point(QubitState::maximally_mixed(), single[0]).matrix()) < 1e-15);
  const std::vector<KrausChannel> too_long(6, KrausChannel::identity(2));
  CHECK_THROWS_AS(pdm_k_point(QubitState::maximally_mixed(), too_long), std::invalid_argument);
  CHECK_THROWS_AS(pdm_k_point(QubitState::maximally_mixed(), {}), std::invalid_argument);
  const std::size_t none[] = {0, 0};
  CHECK(sequential_correlator(QubitState::pure(0.2), single, none) == doctest::Approx(1.0));
}

TEST_CASE("PDM validation") {
  CHECK_THROWS_AS(PseudoDensityMatrix(ComplexMatrix::identity(4), 2), std::invalid_argument);
  CHECK_THROWS_AS(PseudoDensityMatrix(ComplexMatrix::identity(4) * cplx(0.25), 3), std::invalid_argument);
  auto skew = ComplexMatrix::identity(4) * cplx(0.25);
  skew(0, 1) = cplx(0, 1e-3);
  CHECK_THROWS_AS(PseudoDensityMatrix(skew, 2), std::invalid_argument);
  const PseudoDensityMatrix product(ComplexMatrix::identity(4) * cplx(0.25), 2);
  CHECK_FALSE(is_causal(product));
  CHECK(causality_F(product) == 0.0);
  CHECK_THROWS_AS(product.marginal(2), std::out_of_range);
}

TEST_CASE("Choi negativity equals F for the maximally mixed input") {
  oracle::Random rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ch = rng.channel(1 + trial % 4);
    CHECK(choi_negativity(ch) ==
          doctest::Approx(causality_F(pdm_two_point(QubitState::maximally_mixed(), ch))).epsilon(1e-10).scale(1.0));
  }
  CHECK(choi_negativity(KrausChannel::identity(2)) == doctest::Approx(1.0));
  CHECK(choi_negativity(amplitude_damping(1.0)) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("causality monotones under post-processing and mixing") {
  oracle::Random rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = rng.state();
    const auto ch = rng.channel(1 + trial % 3);
    const auto post = rng.channel(1 + trial % 4);
    const double before = f_cm(pdm_two_point(rho, ch));
    CHECK(f_cm(pdm_two_point(rho, compose(post, ch))) <= before + 1e-12);

    const auto sigma = rng.state();
    const double w = rng.uniform();
    const QubitState mix(rho.matrix() * cplx(w) + sigma.matrix() * cplx(1 - w));
    CHECK(f_cm(pdm_two_point(mix, ch)) <= w * before + (1 - w) * f_cm(pdm_two_point(sigma, ch)) + 1e-12);
    CHECK(causality_F(pdm_two_point(rho, ch)) >= 0.0);
  }
}
