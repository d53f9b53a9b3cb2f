#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "qxform/examples.hpp"

using namespace qxform;

TEST_CASE("exponential-mass closed forms") {
  SECTION("map forward at t-t0 = ln 2 with U=1 gives 1") {
    const ExampleSystems ex = example1_systems(Example1Params{1.0, 1.0, 0.0}, 2.0);
    REQUIRE(ex.map.forward.value(std::log(2.0)) - ex.map.t0_prime ==
            Catch::Approx(1.0).margin(1e-12));
    REQUIRE(ex.map.inverse.value(ex.map.t0_prime + 1.0) ==
            Catch::Approx(std::log(2.0)).margin(1e-12));
  }
  SECTION("U < 0 bounds the primed time by 1/|U|") {
    const ExampleSystems ex = example1_systems(Example1Params{-1.0, 1.0, 0.0}, 20.0);
    REQUIRE(ex.map.forward.value(20.0) < ex.map.t0_prime + 1.0);
    REQUIRE_THROWS_AS(ex.map.inverse.value(ex.map.t0_prime + 1.0), OutOfDomainError);
  }
  SECTION("TO coefficient starts at w^2/2") {
    const ExampleSystems ex = example1_systems(Example1Params{0.5, 1.4, 0.0}, 2.0);
    REQUIRE(ex.to.g2.value(ex.map.t0_prime) == Catch::Approx(0.5 * 1.4 * 1.4).margin(1e-12));
  }
  SECTION("U = 0 degenerates to the identity map and plain oscillator") {
    const ExampleSystems ex = example1_systems(Example1Params{0.0, 1.0, 0.0}, 2.0);
    REQUIRE(ex.map.forward.value(1.3) == Catch::Approx(1.3).margin(1e-14));
    REQUIRE(ex.to.g2.value(1.7) == 0.5);
    REQUIRE(ex.tm.f.value(0.9) == 1.0);
  }
  SECTION("nonpositive omega is rejected rather than squared away") {
    REQUIRE_THROWS_AS(example1_systems(Example1Params{0.1, -1.0, 0.0}), ArgumentError);
    REQUIRE_THROWS_AS(example1_systems(Example1Params{0.1, 0.0, 0.0}), ArgumentError);
  }
}

TEST_CASE("exponential-mass pipeline agrees with the closed forms") {
  for (double U : {0.4, -0.4}) {
    const ExampleSystems ex = example1_systems(Example1Params{U, 1.2, 0.5}, 4.0);
    const std::vector<double> grid = uniform_grid(0.5, 4.5, 2049);
    const TqToTmResult step1 = tq_to_tm_pipeline(ex.tq, GaugeTarget::restricted(), 0.5, grid);
    double gauge_dev = 0.0, tm_dev = 0.0;
    for (double t : uniform_grid(0.5, 4.5, 257)) {
      gauge_dev = std::max({gauge_dev, std::abs(step1.gauge.kappa.value(t)),
                            std::abs(step1.gauge.mu.value(t)),
                            std::abs(step1.gauge.nu.value(t) - ex.gauge.nu.value(t))});
      tm_dev = std::max({tm_dev, std::abs(step1.tm.f.value(t) - ex.tm.f.value(t)),
                         std::abs(step1.tm.f2.value(t) - ex.tm.f2.value(t))});
    }
    REQUIRE(gauge_dev < 1e-8);
    REQUIRE(tm_dev < 1e-8);

    const TimeMap map = time_map_from_f(step1.tm.f, 0.5, 0.5, grid);
    double map_dev = 0.0;
    for (double t : uniform_grid(0.5, 4.5, 257))
      map_dev = std::max(map_dev, std::abs(map.forward.value(t) - ex.map.forward.value(t)));
    REQUIRE(map_dev < 1e-8);

    const TOSystem to = tm_to_to(step1.tm, map);
    const double tp_hi = map.forward.value(4.5) * (1 - 1e-9);
    double to_dev = 0.0;
    for (double tp : uniform_grid(0.5, tp_hi, 257))
      to_dev = std::max(to_dev, std::abs(to.g2.value(tp) - ex.to.g2.value(tp)));
    REQUIRE(to_dev < 1e-7);
  }
}

TEST_CASE("power-law closed forms") {
  SECTION("a=1 map: forward at t=e t0 advances by t0") {
    const ExampleSystems ex = example2_systems(Example2Params{1.0, 0.5, 1.0, 1.0});
    REQUIRE(ex.map.forward.value(std::exp(1.0)) - ex.map.t0_prime ==
            Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("a=2 map is 1 - 1/t with supremum t0/(a-1)") {
    const ExampleSystems ex = example2_systems(Example2Params{2.0, -1.0, 1.0, 1.0});
    for (double t : {1.0, 2.0, 5.0, 10.0})
      REQUIRE(ex.map.forward.value(t) - ex.map.t0_prime ==
              Catch::Approx(1.0 - 1.0 / t).margin(1e-12));
    REQUIRE_THROWS_AS(ex.map.inverse.value(ex.map.t0_prime + 1.0), OutOfDomainError);
  }
  SECTION("b = -a collapses the TO coefficient to a constant") {
    const ExampleSystems ex = example2_systems(Example2Params{0.5, -0.5, 1.3, 1.0});
    for (double tp : uniform_grid(ex.to.g2.domain().lo, ex.to.g2.domain().hi, 33))
      REQUIRE(ex.to.g2.value(tp) == Catch::Approx(0.5 * 1.3 * 1.3).margin(1e-12));
  }
  SECTION("a = 0 is rejected") {
    REQUIRE_THROWS_AS(example2_systems(Example2Params{0.0, 1.0, 1.0, 1.0}), ArgumentError);
  }
  SECTION("t0 and omega must be positive") {
    REQUIRE_THROWS_AS(example2_systems(Example2Params{1.0, 1.0, 1.0, -2.0}), ArgumentError);
    REQUIRE_THROWS_AS(example2_systems(Example2Params{1.0, 1.0, 0.0, 1.0}), ArgumentError);
  }
  SECTION("the a != 1 map converges to the a = 1 map as a -> 1") {
    const ExampleSystems at1 = example2_systems(Example2Params{1.0, 0.0, 1.0, 1.0}, 2.0);
    for (double a : {1.0 + 1e-4, 1.0 - 1e-4}) {
      const ExampleSystems near1 = example2_systems(Example2Params{a, 0.0, 1.0, 1.0}, 2.0);
      double dev = 0.0;
      for (double t : uniform_grid(1.0, 2.0, 101))
        dev = std::max(dev, std::abs(near1.map.forward.value(t) - at1.map.forward.value(t)));
      REQUIRE(dev < 1e-3);
    }
  }
}

TEST_CASE("power-law pipeline agrees with the closed forms") {
  for (double a : {0.5, 1.0, 2.0}) {
    const double b = 0.3;
    const ExampleSystems ex = example2_systems(Example2Params{a, b, 1.0, 1.0});
    const std::vector<double> grid = uniform_grid(1.0, 10.0, 4097);
    const TqToTmResult step1 = tq_to_tm_pipeline(ex.tq, GaugeTarget::restricted(), 1.0, grid);
    double tm_dev = 0.0;
    for (double t : uniform_grid(1.0, 10.0, 257))
      tm_dev = std::max({tm_dev, std::abs(step1.tm.f.value(t) - ex.tm.f.value(t)),
                         std::abs(step1.tm.f2.value(t) - ex.tm.f2.value(t))});
    REQUIRE(tm_dev < 1e-8);

    const TimeMap map = time_map_from_f(step1.tm.f, 1.0, 1.0, grid);
    const TOSystem to = tm_to_to(step1.tm, map);
    const double tp_hi = map.forward.value(10.0) * (1 - 1e-9);
    double to_dev = 0.0;
    for (double tp : uniform_grid(1.0, tp_hi, 257))
      to_dev = std::max(to_dev, std::abs(to.g2.value(tp) - ex.to.g2.value(tp)));
    REQUIRE(to_dev < 1e-7);
  }
}

TEST_CASE("many power-law systems collapse onto one oscillator") {
  SECTION("the b = -a family maps to the same constant TO image") {
    const DegeneracyReport rep = example2_degeneracy_check({0.5, 2.0, -1.0}, 1.0, 1.0);
    REQUIRE(rep.max_dev_from_oscillator < 1e-7);
    REQUIRE(rep.max_pairwise_dev < 1e-7);
  }
  SECTION("a single system has zero pairwise deviation") {
    const DegeneracyReport rep = example2_degeneracy_check({0.5}, 1.0, 1.0);
    REQUIRE(rep.max_pairwise_dev == 0.0);
  }
  SECTION("excluded exponents are rejected") {
    REQUIRE_THROWS_AS(example2_degeneracy_check({0.5, 0.0}, 1.0, 1.0), ArgumentError);
    REQUIRE_THROWS_AS(example2_degeneracy_check({1.0}, 1.0, 1.0), ArgumentError);
  }
}
