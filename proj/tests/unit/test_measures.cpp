#include <doctest.h>

#include <cmath>
#include <numbers>

#include "causalnm/measures.hpp"
#include "oracles.hpp"

using namespace causalnm;

namespace {

constexpr double kPi = std::numbers::pi;
const ADParams kNonMarkov{3.0, 0.6};
const ADParams kMarkov{0.6, 3.0};

template <class F>
Curve sampled(const TimeGrid& grid, F&& f) {
  Curve c{grid, std::vector<double>(grid.size()), std::vector<PointFlag>(grid.size(), PointFlag::ok)};
  for (std::size_t i = 0; i < grid.size(); ++i) c.values[i] = f(grid.at(i));
  return c;
}

MeasureOptions quick(StateGrid states = {8, 2}) {
  MeasureOptions o;
  o.states = states;
  o.threads = 1;
  return o;
}

}  // namespace

TEST_CASE("time grids") {
  const TimeGrid g(0.0, 10.0, 1e-3);
  CHECK(g.size() == 10001);
  CHECK(g.at(10000) == doctest::Approx(10.0));
  CHECK(TimeGrid(0.0, 1.05, 0.1).size() == 11);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, std::nan(""), 0.1), std::invalid_argument);
}

TEST_CASE("positive-slope integral on analytic curves") {
  const TimeGrid grid(0.0, kPi, 1e-3);
  const auto sin2 = sampled(grid, [](double t) { return std::pow(std::sin(t), 2); });
  CHECK(positive_slope_integral(sin2) == doctest::Approx(1.0).epsilon(1e-4));

  // Total-variation form is twice the positive part.
  const TimeGrid long_grid(0.0, 3 * kPi + 0.4, 1e-3);
  const auto wave = sampled(long_grid, [](double t) { return std::pow(std::sin(t), 2); });
  const auto damped = sampled(long_grid, [](double t) { return std::exp(-0.3 * t) * std::cos(2 * t); });
  for (const auto* c : {&wave, &damped}) {
    const double m = positive_slope_integral(*c);
    CHECK(total_variation_measure(*c) == doctest::Approx(2 * m).epsilon(1e-3));
  }
  // Monotone decreasing curves give zero.
  CHECK(positive_slope_integral(sampled(grid, [](double t) { return std::exp(-t); })) == 0.0);
}

TEST_CASE("flagged points are excluded with their neighbourhood") {
  const TimeGrid grid(0.0, 1.0, 0.01);
  auto c = sampled(grid, [](double t) { return t; });
  c.flags[50] = PointFlag::singular;
  c.values[50] = 1e9;
  const auto slopes = curve_slopes(c);
  for (std::size_t i = 40; i <= 60; ++i) CHECK_FALSE(slopes[i].has_value());
  REQUIRE(slopes[39].has_value());
  REQUIRE(slopes[61].has_value());
  CHECK(*slopes[39] == doctest::Approx(1.0));
  CHECK(*slopes[61] == doctest::Approx(1.0));
  // The spike is invisible; the 21-point gap and its two edge intervals are lost.
  CHECK(positive_slope_integral(c) == doctest::Approx(1.0 - 22 * 0.01).epsilon(1e-9));

  const TimeGrid tiny(0.0, 1.0, 0.1);
  auto few = sampled(tiny, [](double t) { return t; });
  few.flags[5] = PointFlag::singular;
  CHECK_THROWS_AS(positive_slope_integral(few), std::invalid_argument);
  few.flags.pop_back();
  CHECK_THROWS_AS(curve_slopes(few), std::invalid_argument);
}

TEST_CASE("F curve for the ground state follows log2(1 + |G|)") {
  const TimeGrid grid(0.0, 10.0, 1e-2);
  for (const auto& p : {kNonMarkov, kMarkov}) {
    const auto c = f_curve(ad_family(p), QubitState::pure(kPi / 2), grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(c.values[i] == doctest::Approx(std::log2(1 + std::abs(decoherence_G(p, grid.at(i))))).epsilon(1e-12));
  }
  // Outside a tabulated family's domain the points are flagged, not fatal.
  const auto table = tabulated_family({{0.0, {ComplexMatrix::identity(2)}}, {0.5, {ComplexMatrix::identity(2)}}});
  const auto c = f_curve(table, QubitState::pure(1.0), TimeGrid(0.0, 1.0, 0.05));
  CHECK(c.unflagged() == 11);
  CHECK(c.flags.back() == PointFlag::singular);
}

TEST_CASE("measure separates the two regimes") {
  const TimeGrid grid(0.0, 10.0, 1e-2);
  const auto markov = nm_measure(ad_family(kMarkov), grid, quick());
  CHECK(markov.M <= 1e-9);
  CHECK(markov.C <= 1e-9);
  CHECK(markov.blp <= 1e-9);
  REQUIRE(markov.hcla.has_value());
  CHECK(*markov.hcla == 0.0);

  const auto nm = nm_measure(ad_family(kNonMarkov), grid, quick());
  CHECK(nm.M > 0.01);
  CHECK(nm.C == doctest::Approx(nm.M / (1 + nm.M)));
  REQUIRE(nm.argmax.has_value());
  CHECK(nm.argmax->theta == doctest::Approx(kPi / 2).epsilon(1e-3));
  CHECK(nm.variant_M == doctest::Approx(2 * nm.M).epsilon(1e-2));
  CHECK(*nm.hcla > 0.0);
  CHECK(nm.blp > 0.0);

  CHECK_THROWS_AS(nm_measure(ad_family(kMarkov), grid, quick({4, 1})), std::invalid_argument);
}

TEST_CASE("measure is independent of thread count") {
  const TimeGrid grid(0.0, 5.0, 1e-2);
  auto options = quick({10, 3});
  const auto serial = nm_measure(ad_family(kNonMarkov), grid, options);
  options.threads = 3;
  const auto parallel = nm_measure(ad_family(kNonMarkov), grid, options);
  CHECK(serial.M == parallel.M);
  CHECK(serial.blp == parallel.blp);
  CHECK(serial.argmax->theta == parallel.argmax->theta);
  CHECK(serial.argmax->phi == parallel.argmax->phi);
}

TEST_CASE("measure is stable under grid refinement") {
  const auto coarse = nm_measure(ad_family(kNonMarkov), TimeGrid(0.0, 10.0, 2e-3), quick({8, 1}));
  const auto fine = nm_measure(ad_family(kNonMarkov), TimeGrid(0.0, 10.0, 1e-3), quick({8, 1}));
  CHECK(std::abs(fine.M - coarse.M) < 1e-3 * fine.M);
}

TEST_CASE("time-dependent Markovian dynamics never increase F") {
  oracle::Random rng(51);
  const TimeGrid grid(0.0, 10.0, 1e-2);
  const auto family = ad_family(kMarkov);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = f_curve(family, QubitState::pure(rng.uniform(0, kPi / 2), rng.uniform(0, 2 * kPi)), grid);
    for (std::size_t i = 0; i + 1 < c.values.size(); ++i) CHECK(c.values[i + 1] <= c.values[i] + 1e-9);
  }
}

TEST_CASE("revivals of F sit inside intervals of negative decay rate") {
  const TimeGrid grid(0.0, 10.0, 1e-3);
  const auto ground = QubitState::pure(kPi / 2);
  const auto family = ad_family(kNonMarkov);
  const auto c = f_curve(family, ground, grid);
  const auto slopes = curve_slopes(c);
  const auto rates = decay_rate_curve(kNonMarkov, grid);
  std::size_t rising = 0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (!slopes[i] || *slopes[i] <= 1e-6) continue;
    ++rising;
    CHECK(is_causal(pdm_two_point(ground, family.at(grid.at(i)))));
    // At a root of G the rate itself is undefined.
    if (rates.flags[i] == PointFlag::ok) CHECK(rates.values[i] < 0.0);
  }
  CHECK(rising > 100);
}

TEST_CASE("decay-rate curve and HCLA") {
  const TimeGrid grid(0.0, 10.0, 1e-3);
  const auto rates = decay_rate_curve(kNonMarkov, grid);
  // G has three roots in [0, 10] for these parameters (spacing 2 pi / 1.8).
  CHECK(rates.unflagged() == grid.size() - 3);
  CHECK(hcla_measure(kNonMarkov, grid).singularities == 3);
  CHECK(hcla_measure(kNonMarkov, grid).excluded_points == 63);

  CHECK(hcla_measure(kMarkov, grid).value == 0.0);
  CHECK(hcla_measure(kNonMarkov, TimeGrid(0.0, 4.0, 1e-3)).value > 0.0);

  // Sign equivalence at random unflagged points, ground-state F.
  oracle::Random rng(52);
  const auto slopes = curve_slopes(f_curve(ad_family(kNonMarkov), QubitState::pure(kPi / 2), grid));
  int checked = 0;
  while (checked < 50) {
    const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<double>(grid.size() - 1)));
    if (!slopes[i] || rates.flags[i] != PointFlag::ok || std::abs(*slopes[i]) < 1e-9) continue;
    CHECK((*slopes[i] > 0.0) == (rates.values[i] < 0.0));
    ++checked;
  }
}

TEST_CASE("trace distance and BLP") {
  const TimeGrid grid(0.0, 10.0, 1e-2);
  const auto plus = QubitState::pure(kPi / 4), minus = QubitState::orthogonal_partner(kPi / 4);
  const auto d = trace_distance_curve(ad_family(kNonMarkov), plus, minus, grid);
  const auto f = f_curve(ad_family(kNonMarkov), QubitState::pure(kPi / 2), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(d.values[i] == doctest::Approx(std::sqrt(1 - damping_r(kNonMarkov, grid.at(i)))).epsilon(1e-10));
    CHECK(f.values[i] == doctest::Approx(std::log2(1 + d.values[i])).epsilon(1e-10));
  }

  const auto still = trace_distance_curve(gad_family({0.0}), plus, minus, grid);
  const auto mixing = trace_distance_curve(gad_family({3.0}), plus, minus, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(still.values[i] == doctest::Approx(mixing.values[i]).epsilon(1e-10));
    CHECK(still.values[i] == doctest::Approx(std::sqrt(1 - GADParams::lambda(grid.at(i)))).epsilon(1e-10));
  }

  CHECK(blp_measure(gad_family({3.0}), grid, {8, 2}, 1) <= 1e-9);
  CHECK(nm_measure(gad_family({3.0}), grid, quick()).M > 0.05);
  CHECK(blp_measure(ad_family(kMarkov), grid, {8, 2}, 1) <= 1e-9);
  CHECK(blp_measure(ad_family(kNonMarkov), grid, {8, 2}, 1) > 0.1);
  CHECK_THROWS_AS(blp_measure(ad_family(kMarkov), grid, {7, 1}), std::invalid_argument);
}
