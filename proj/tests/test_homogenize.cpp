#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gcelab/error.hpp"
#include "gcelab/homogenize.hpp"
#include "oracles.hpp"

using namespace gcelab;

TEST_CASE("flat case: constant factor") {
  const PeriodicFunction f([](double) { return 3.0; }, 2.0);
  const PeriodicSolution s = solve_flat_case(f);
  CHECK(s.c == doctest::Approx(3.0));
  for (double v : s.values) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("flat case: sine against the closed form") {
  const double w = 3.7;
  const double k = 2.0 * std::numbers::pi / w;
  const PeriodicFunction f([&](double t) { return 1.5 + std::sin(k * t); }, w);
  const PeriodicSolution s = solve_flat_case(f);
  CHECK(std::abs(s.c - oracle::mean([&](double t) { return f(t); }, w)) < 1e-12);
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    CHECK(std::abs(s.values[i] + std::cos(k * s.t[i]) / k) < 1e-10);
  }
  CHECK(s.periodicity_residual < 1e-10);
  CHECK(s.ode_residual < 1e-8);
}

TEST_CASE("flat case: symmetrized solution is reflection invariant for even f") {
  const double w = 2.0 * std::numbers::pi;
  const PeriodicFunction f([](double t) { return 2.0 + std::cos(t) + 0.4 * std::cos(3.0 * t); }, w);
  const PeriodicSolution s = symmetrize_flat_solution(solve_flat_case(f), f);
  const int n = static_cast<int>(s.values.size()) - 1;
  // The 1-form alpha_2 dz_1 is invariant under z -> -z: alpha_2(-t) = -alpha_2(t).
  for (int i = 0; i <= n; ++i) CHECK(std::abs(s.values[i] + s.values[(n - i) % n]) < 1e-14);
  CHECK(s.ode_residual < 1e-8);
}

TEST_CASE("flat case: solutions differ by a constant") {
  const double w = 1.3;
  const PeriodicFunction f([&](double t) { return 2.0 + std::sin(2 * std::numbers::pi * t / w); }, w);
  const PeriodicSolution a = solve_flat_case(f, 1024);
  const PeriodicSolution b = solve_flat_case(f, 2048);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[2 * i]) < 1e-10);
}

TEST_CASE("flat case: rejects non-positive and non-periodic factors") {
  auto code = [](const PeriodicFunction& f) {
    try {
      solve_flat_case(f);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code(PeriodicFunction([](double) { return -1.0; }, 1.0)) == ErrorCode::InvalidConformalFactor);
  CHECK(code(PeriodicFunction([](double t) { return std::sin(t); }, 2.0 * std::numbers::pi)) ==
        ErrorCode::InvalidConformalFactor);
  CHECK(code(PeriodicFunction([](double t) { return 2.0 + std::sin(t); }, 3.0)) ==
        ErrorCode::InvalidConformalFactor);
  CHECK_THROWS_AS(PeriodicFunction([](double) { return 1.0; }, 0.0), Error);
}

TEST_CASE("hyperbolic case") {
  SUBCASE("constant factor with c = f") {
    const PeriodicSolution s = solve_hyperbolic_case(PeriodicFunction([](double) { return 1.0; }, 1.0), 1.0);
    for (double v : s.values) CHECK(std::abs(v) < 1e-15);
  }
  SUBCASE("drift grows like e^y and two solutions differ by p e^y") {
    const double a0 = 1.7;
    const PeriodicFunction f([&](double t) { return 2.0 + 0.5 * std::cos(2 * std::numbers::pi * t / a0); }, a0);
    const PeriodicSolution u = integrate_hyperbolic(f, 0.3, 0.0);
    const PeriodicSolution v = integrate_hyperbolic(f, 0.3, 1.0);
    for (std::size_t i = 0; i < u.values.size(); i += 64) {
      CHECK(std::abs((v.values[i] - u.values[i]) - std::exp(u.t[i])) < 1e-9);
    }
    const PeriodicSolution s = solve_hyperbolic_case(f, 0.3);
    CHECK(s.periodicity_residual < 1e-10);
    CHECK(s.ode_residual < 1e-8);
    CHECK(std::abs(s.values.back() - s.values.front()) < 1e-10);
  }
  SUBCASE("exact periodic solution for a single mode") {
    // beta' - beta = c - f with f = c + cos(t): beta = (cos t - sin t)/2.
    const PeriodicFunction f([](double t) { return 2.0 + std::cos(t); }, 2.0 * std::numbers::pi);
    const PeriodicSolution s = solve_hyperbolic_case(f, 2.0);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      CHECK(std::abs(s.values[i] - 0.5 * (std::cos(s.t[i]) - std::sin(s.t[i]))) < 1e-9);
    }
  }
}

TEST_CASE("sampled functions interpolate trigonometrically") {
  const double w = 2.5;
  std::vector<double> samples;
  for (int j = 0; j < 40; ++j) samples.push_back(3.0 + std::sin(2 * std::numbers::pi * j / 40.0) +
                                                  0.2 * std::cos(6 * std::numbers::pi * j / 40.0));
  const PeriodicFunction f = PeriodicFunction::from_samples(samples, w);
  for (double t : {0.1, 0.77, 1.9}) {
    const double x = 2 * std::numbers::pi * t / w;
    CHECK(f(t) == doctest::Approx(3.0 + std::sin(x) + 0.2 * std::cos(3 * x)).epsilon(1e-12));
  }
  CHECK(f.mean() == doctest::Approx(3.0));
}

TEST_CASE("Nil commutator shift is twice the signed area") {
  CHECK(nil_commutator_shift({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(2.0));
  CHECK(std::abs(nil_commutator_shift({1.0, 2.0}, {-2.0, -4.0})) < 1e-14);
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int s = 0; s < 20; ++s) {
    const Point2 V{u(rng), u(rng)};
    const Point2 W{u(rng), u(rng)};
    const double shift = nil_commutator_shift(V, W);
    CHECK(std::abs(shift - oracle::holonomy_shift(V, W)) < 1e-10);
    CHECK(std::abs(shift - nil_automorphism_commutator(V, W)) < 1e-10);
    CHECK(std::abs(shift + nil_commutator_shift(W, V)) < 1e-10);
    CHECK(std::abs(nil_commutator_shift({2 * V[0], 2 * V[1]}, W) - 2 * shift) < 1e-10);
  }
  const HorizontalLiftPath p = lift_polygon({{0.2, -0.1}, {1.0, 0.3}, {-0.5, 2.0}}, {0.2, -0.1, 0.5});
  CHECK(p.horizontality_residual < 1e-14);
  CHECK(p.lifted.size() == p.base.size());
  CHECK(p.lifted.front()[2] == 0.5);
  CHECK_THROWS_AS(lift_polygon({{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(lift_polygon({}, {0.0, 0.0, 0.0}), Error);
}
