#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"
#include "qxform/examples.hpp"
#include "qxform/propagate.hpp"

using namespace qxform;
using testutil::Rng;

namespace {

SpatialGrid grid_box(double half_width, std::size_t n) {
  SpatialGrid g;
  g.n = n;
  g.x_min = -half_width;
  g.dx = 2.0 * half_width / double(n);
  return g;
}

TQSystem free_particle(const Domain& D) {
  const TimeFunction z = TimeFunction::constant(0.0, D);
  return TQSystem{z, z, z, z, z, z};
}

}  // namespace

TEST_CASE("grid validation") {
  SpatialGrid g = grid_box(10.0, 100);  // not a power of two
  REQUIRE_THROWS_AS(g.validate(), ArgumentError);
  g.n = 32;  // too small
  REQUIRE_THROWS_AS(g.validate(), ArgumentError);
  g.n = 64;
  REQUIRE_NOTHROW(g.validate());
}

TEST_CASE("free-particle spreading: <x^2>(t) = (1 + t^2)/2") {
  const Domain D{0.0, 1.0};
  const WaveState psi0 = make_gaussian(grid_box(10.0, 1024), 0.0, 1.0, 0.0);
  const Trajectory traj = propagate(free_particle(D), psi0, 1.0, 500);
  const Observables& last = traj.observables.back();
  const double x2 = last.dx * last.dx + last.mean_x * last.mean_x;
  REQUIRE(std::abs(x2 - 1.0) < 1e-4);
  REQUIRE(std::abs(traj.states.back().t - 1.0) < 1e-12);
}

TEST_CASE("harmonic coherent state oscillates classically") {
  const double x0 = 1.0;
  const double period = 2.0 * std::numbers::pi;
  const Domain D{0.0, period};
  TOSystem to{TimeFunction::constant(0.5, D), TimeFunction::constant(0.0, D),
              TimeFunction::constant(0.0, D)};
  const WaveState psi0 = make_gaussian(grid_box(9.0, 4096), x0, 1.0, 0.0);
  PropagateOptions opts;
  opts.store_every = 10;
  const Trajectory traj = propagate(to, psi0, period, 4000, opts);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double expect = x0 * std::cos(traj.states[i].t);
    worst = std::max(worst, std::abs(traj.observables[i].mean_x - expect));
  }
  REQUIRE(worst < 1e-4);
}

TEST_CASE("one CN step is consistent: psi+ = psi + O(dt)") {
  const Domain D{0.0, 1.0};
  const ExampleSystems ex = example1_systems(Example1Params{0.3, 1.0, 0.0}, 1.0);
  const WaveState psi0 = make_gaussian(grid_box(10.0, 256), 0.0, 1.0, 0.0);
  const double dt = 1e-5;
  const Trajectory traj = propagate(ex.tq, psi0, dt, 1);
  REQUIRE(l2_diff(traj.states.back(), psi0) < 5e-5);
}

TEST_CASE("norm is preserved to 1e-8 over 2000 steps, dilation term included") {
  const ExampleSystems ex = example1_systems(Example1Params{0.2, 1.0, 0.0}, 1.0);
  const WaveState psi0 = make_gaussian(grid_box(12.0, 512), 0.0, 1.0, 0.0);
  PropagateOptions opts;
  opts.store_every = 200;
  const Trajectory traj = propagate(ex.tq, psi0, 1.0, 2000, opts);
  for (const auto& o : traj.observables) REQUIRE(std::abs(o.norm - 1.0) < 1e-8);
}

TEST_CASE("propagate rejects bad inputs") {
  const Domain D{0.0, 1.0};
  SECTION("state too close to the wall") {
    const WaveState bad = make_gaussian(grid_box(6.0, 128), 5.0, 1.0, 0.0);
    REQUIRE_THROWS_AS(propagate(free_particle(D), bad, 1.0, 10), ArgumentError);
  }
  SECTION("negative kinetic coefficient") {
    const TimeFunction z = TimeFunction::constant(0.0, D);
    TQSystem s{TimeFunction::constant(-2.0, D), z, z, z, z, z};  // 1 + k < 0
    const WaveState psi0 = make_gaussian(grid_box(10.0, 128), 0.0, 1.0, 0.0);
    REQUIRE_THROWS_AS(propagate(s, psi0, 1.0, 10), NumericalError);
  }
  SECTION("a fast packet hitting the wall escalates to an error") {
    const WaveState psi0 = make_gaussian(grid_box(8.0, 256), 0.0, 1.0, 6.0);
    REQUIRE_THROWS_AS(propagate(free_particle(Domain{0.0, 3.0}), psi0, 3.0, 600),
                      NumericalError);
  }
}

TEST_CASE("apply_r") {
  const SpatialGrid g = grid_box(16.0, 512);
  const WaveState psi = make_gaussian(g, 0.0, 1.0, 0.0);

  SECTION("identity parameters are the identity") {
    const WaveState out = apply_r(psi, GaugeParams{});
    REQUIRE(l2_diff(out, psi) < 1e-13);
  }

  SECTION("pure dilation matches the closed form on a Gaussian") {
    const double nu = 0.3;
    const WaveState out = apply_r(psi, GaugeParams{0.0, nu, 0.0});
    const double en = std::exp(nu);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
      const double x = g.x(j);
      const double expect =
          std::exp(0.5 * nu) * std::pow(std::numbers::pi, -0.25) *
          std::exp(-en * en * x * x / 2.0);
      worst = std::max(worst, std::abs(out.amps[j].real() - expect) +
                                  std::abs(out.amps[j].imag()));
    }
    REQUIRE(worst < 1e-6);
    REQUIRE(std::abs(out.norm() - 1.0) < 1e-6);
  }

  SECTION("norm is preserved within 1e-6 for generic parameters") {
    const WaveState out = apply_r(psi, GaugeParams{0.7, -0.4, 0.5});
    REQUIRE(std::abs(out.norm() - 1.0) < 1e-6);
  }

  SECTION("expectation values transform by the conjugation identities") {
    Rng rng(0x5eed400);
    const SpatialGrid wide = grid_box(24.0, 1024);  // room for kappa spread + dilation
    const BasisOp ops[] = {BasisOp::X, BasisOp::P, BasisOp::X2, BasisOp::P2, BasisOp::D};
    for (int trial = 0; trial < 100; ++trial) {
      const GaugeParams gp = testutil::random_gauge(rng, 1.0, 0.5, 1.0);
      const WaveState state =
          make_gaussian(wide, rng.uniform(-1.0, 1.0), rng.uniform(0.7, 1.4),
                        rng.uniform(-1.0, 1.0));
      const WaveState mapped = apply_r(state, gp);
      for (BasisOp op : ops) {
        const Complex lhs =
            expectation(mapped, conjugate_element(AlgebraElement::basis(op), gp));
        const Complex rhs = expectation(state, AlgebraElement::basis(op));
        REQUIRE(std::abs(lhs - rhs) < 1e-6);
      }
    }
  }

  SECTION("a dilation overflowing the box raises a headroom error") {
    REQUIRE_THROWS_AS(apply_r(psi, GaugeParams{0.0, -2.0, 0.0}), HeadroomError);
  }
}

TEST_CASE("retime_trajectory") {
  const ExampleSystems ex = example1_systems(Example1Params{1.0, 1.0, 0.0}, 1.0);
  const WaveState psi0 = make_gaussian(grid_box(10.0, 128), 0.0, 1.0, 0.0);
  Trajectory traj = propagate(ex.tm, psi0, std::log(2.0), 64);

  SECTION("stamps map through the closed form, amplitudes untouched") {
    const Trajectory out = retime_trajectory(traj, ex.map, RetimeDirection::Forward);
    REQUIRE(out.states.back().t == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(l2_diff(out.states.back(), traj.states.back()) == 0.0);
  }
  SECTION("forward then inverse restores the stamps") {
    const Trajectory fwd = retime_trajectory(traj, ex.map, RetimeDirection::Forward);
    const Trajectory back = retime_trajectory(fwd, ex.map, RetimeDirection::Inverse);
    for (std::size_t i = 0; i < traj.states.size(); ++i)
      REQUIRE(std::abs(back.states[i].t - traj.states[i].t) < 1e-9);
  }
  SECTION("stamps outside the map domain are rejected") {
    Trajectory shifted = traj;
    for (auto& s : shifted.states) s.t += 100.0;
    REQUIRE_THROWS_AS(retime_trajectory(shifted, ex.map, RetimeDirection::Forward),
                      OutOfDomainError);
  }
}

TEST_CASE("residual of the exact stationary oscillator state") {
  // psi(t) = pi^{-1/4} e^{-x^2/2} e^{-i t/2} solves the TO equation with
  // g2 = 1/2. With second-order spatial operators the residual floor is
  // 2 * (dx^2/12) * ||(x^4-6x^2+3) psi|| / ||psi||, about 2.4e-4 on this grid.
  const Domain D{0.0, 1.0};
  TOSystem to{TimeFunction::constant(0.5, D), TimeFunction::constant(0.0, D),
              TimeFunction::constant(0.0, D)};
  auto embedded = [&](std::size_t n) {
    const SpatialGrid g = grid_box(6.0, n);
    const WaveState base = make_gaussian(g, 0.0, 1.0, 0.0);
    Trajectory traj;
    const double dt = 1e-3;
    for (int i = 0; i < 5; ++i) {
      WaveState s = base;
      s.t = dt * double(i);
      const Complex phase = std::exp(Complex(0.0, -0.5 * s.t));
      for (auto& a : s.amps) a *= phase;
      traj.states.push_back(std::move(s));
    }
    return traj;
  };
  const double r512 = residual(to, embedded(512));
  REQUIRE(r512 < 3e-4);
  const double r1024 = residual(to, embedded(1024));
  REQUIRE(r512 / r1024 > 3.0);  // second-order spatial convergence
  REQUIRE(r512 / r1024 < 5.0);
}

TEST_CASE("residual of a propagated trajectory against its own system is small") {
  const ExampleSystems ex = example1_systems(Example1Params{0.2, 1.0, 0.0}, 0.5);
  const WaveState psi0 = make_gaussian(grid_box(12.0, 512), 0.0, 1.0, 0.0);
  const Trajectory traj = propagate(ex.tm, psi0, 0.5, 500);
  REQUIRE(residual(ex.tm, traj) < 2e-3);
}

TEST_CASE("retimed TM trajectory has a small TO residual (desk-scale check)") {
  const double U = 0.1;
  const ExampleSystems ex = example1_systems(Example1Params{U, 1.0, 0.0}, 1.0);
  const WaveState psi0 = make_gaussian(grid_box(12.0, 512), 0.0, 1.0, 0.0);
  const Trajectory tm_traj = propagate(ex.tm, psi0, 1.0, 500);
  const Trajectory to_traj = retime_trajectory(tm_traj, ex.map, RetimeDirection::Forward);
  REQUIRE(residual(ex.to, to_traj) < 2e-3);
}

TEST_CASE("residual rejects malformed trajectories") {
  const Domain D{0.0, 1.0};
  const WaveState a = make_gaussian(grid_box(10.0, 128), 0.0, 1.0, 0.0);
  Trajectory short_traj;
  short_traj.states = {a, a};
  REQUIRE_THROWS_AS(residual(free_particle(D), short_traj), ArgumentError);

  Trajectory mixed;
  mixed.states = {a, a, a};
  mixed.states[1].t = 0.1;
  mixed.states[2].t = 0.2;
  mixed.states[2].grid = grid_box(10.0, 256);
  mixed.states[2].amps.resize(256);
  REQUIRE_THROWS_AS(residual(free_particle(D), mixed), ArgumentError);
}

TEST_CASE("observables are recomputable from the states") {
  const ExampleSystems ex = example1_systems(Example1Params{0.3, 1.0, 0.0}, 0.2);
  const WaveState psi0 = make_gaussian(grid_box(10.0, 256), 0.3, 1.0, 0.4);
  const Trajectory traj = propagate(ex.tq, psi0, 0.2, 50);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Observables o = observables(traj.states[i]);
    REQUIRE(std::abs(o.norm - traj.observables[i].norm) < 1e-10);
    REQUIRE(std::abs(o.mean_x - traj.observables[i].mean_x) < 1e-10);
    REQUIRE(std::abs(o.mean_p - traj.observables[i].mean_p) < 1e-10);
    REQUIRE(std::abs(o.dx - traj.observables[i].dx) < 1e-10);
    REQUIRE(std::abs(o.dp - traj.observables[i].dp) < 1e-10);
  }
}

TEST_CASE("grid convergence: doubling n and halving dt shrinks the self-residual") {
  const ExampleSystems ex = example1_systems(Example1Params{0.2, 1.0, 0.0}, 0.5);
  auto run = [&](std::size_t n, std::size_t steps) {
    const WaveState psi0 = make_gaussian(grid_box(12.0, n), 0.0, 1.0, 0.0);
    return residual(ex.tm, propagate(ex.tm, psi0, 0.5, steps));
  };
  const double coarse = run(512, 250);
  const double fine = run(1024, 500);
  REQUIRE(coarse / fine >= 3.0);
}
