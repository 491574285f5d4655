#include <catch_amalgamated.hpp>

#include <cmath>

#include "symdiag/generators.hpp"
#include "symdiag/ortho.hpp"
#include "symdiag/rotation.hpp"

using namespace symdiag;

TEST_CASE("h'(0) = 6d and h''(0) = -6omega against finite differences") {
  for (int s = 0; s < 20; ++s) {
    const int n = 2 + s % 4;
    const SymTensor3 a = random_symmetric(n, 300 + s);
    const int i = 0, j = 1 + s % (n - 1);
    const PairStats st = pair_stats(a, i, j);
    const double h = 1e-5;
    auto obj = [&](double t) { return rotation_objective(a, i, j, t); };
    const double d1 = (obj(h) - obj(-h)) / (2.0 * h);
    const double d2 = (obj(h) - 2.0 * obj(0.0) + obj(-h)) / (h * h);
    CHECK_THAT(d1, Catch::Matchers::WithinAbs(6.0 * st.d, 1e-6));
    CHECK_THAT(d2, Catch::Matchers::WithinAbs(-6.0 * st.omega, 1e-4));
  }
}

TEST_CASE("rational gain formula equals the objective increment") {
  for (int s = 0; s < 30; ++s) {
    const SymTensor3 a = random_symmetric(3, 400 + s);
    const PairStats st = pair_stats(a, 0, 2);
    for (double x : {-3.0, -1.0, -0.2, 0.0, 0.4, 1.0, 7.5}) {
      const double theta = std::atan(x);
      const double inc =
          rotation_objective(a, 0, 2, theta) - rotation_objective(a, 0, 2, 0.0);
      CHECK_THAT(rotation_gain(st.d, st.omega, x), Catch::Matchers::WithinAbs(inc, 1e-10));
    }
    // The at-infinity point theta = pi/2 swaps the diagonal pair: zero gain.
    const double inc_inf =
        rotation_objective(a, 0, 2, M_PI / 2) - rotation_objective(a, 0, 2, 0.0);
    CHECK_THAT(inc_inf, Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("gain derivative matches finite differences of the gain") {
  for (int s = 0; s < 20; ++s) {
    Rng rng(500 + s);
    const double d = rng.normal(), omega = rng.normal();
    for (double x : {-2.0, -0.7, 0.1, 1.3}) {
      const double h = 1e-6;
      const double fd = (rotation_gain(d, omega, x + h) - rotation_gain(d, omega, x - h)) /
                        (2.0 * h);
      CHECK_THAT(rotation_gain_derivative(d, omega, x),
                 Catch::Matchers::WithinAbs(fd, 1e-6));
    }
  }
}

TEST_CASE("optimal angle beats a dense grid and is stationary") {
  Rng rng(600);
  for (int s = 0; s < 200; ++s) {
    const double d = rng.normal() * std::pow(10.0, -3.0 * rng.uniform());
    const double omega = rng.normal();
    const PairStats st{0, 1, d, omega};
    const AngleSolution sol = optimal_angle(st);
    CHECK(sol.gain >= 0.0);
    if (std::isfinite(sol.x_star))
      CHECK(std::abs(rotation_gain_derivative(d, omega, sol.x_star)) < 1e-9);
    double grid_best = 0.0;
    const int grid = 20000;
    for (int g = 0; g < grid; ++g) {
      const double theta = -M_PI / 2 + M_PI * (g + 0.5) / grid;
      grid_best = std::max(grid_best, rotation_gain(d, omega, std::tan(theta)));
    }
    CHECK(sol.gain >= grid_best - 1e-9);
  }
}

TEST_CASE("degenerate coefficient branches") {
  // d = 0, omega > 0: no rotation helps.
  AngleSolution s1 = optimal_angle({0, 1, 0.0, 2.0});
  CHECK(s1.x_star == 0.0);
  CHECK(s1.gain == 0.0);
  // d = 0, omega < 0: quarter turn with gain -3 omega / 4.
  AngleSolution s2 = optimal_angle({0, 1, 0.0, -2.0});
  CHECK(std::abs(s2.x_star) == 1.0);
  CHECK_THAT(s2.gain, Catch::Matchers::WithinRel(1.5, 1e-12));
  // d = omega = 0: stationary, stay put.
  AngleSolution s3 = optimal_angle({0, 1, 0.0, 0.0});
  CHECK(s3.x_star == 0.0);
  CHECK(s3.gain == 0.0);
}

TEST_CASE("quarter-pi restriction clamps the maximizer") {
  Rng rng(700);
  for (int s = 0; s < 100; ++s) {
    const double d = rng.normal(), omega = rng.normal();
    const AngleSolution sol = optimal_angle({0, 1, d, omega}, /*restrict_quarter_pi=*/true);
    CHECK(std::abs(sol.x_star) <= 1.0);
    double grid_best = 0.0;
    for (int g = 0; g <= 10000; ++g) {
      const double x = -1.0 + 2.0 * g / 10000.0;
      grid_best = std::max(grid_best, rotation_gain(d, omega, x));
    }
    CHECK(sol.gain >= grid_best - 1e-9);
  }
}

TEST_CASE("pair update equals the full contraction with a Givens matrix") {
  Rng rng(800);
  for (int s = 0; s < 20; ++s) {
    const int n = 2 + s % 5;
    const SymTensor3 a = random_symmetric(n, 800 + s);
    const int i = s % (n - 1);
    const int j = i + 1 + s % (n - i - 1);
    const double theta = (rng.uniform() - 0.5) * M_PI;
    const SymTensor3 fast = apply_rotation(a, i, j, theta);
    const SymTensor3 slow = contract_all(a, givens(n, i, j, theta));
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q)
        for (int r = q; r < n; ++r)
          CHECK_THAT(fast(p, q, r), Catch::Matchers::WithinAbs(slow(p, q, r), 1e-12));
  }
}

TEST_CASE("rotation objective only moves the two pair diagonals") {
  const SymTensor3 a = random_symmetric(5, 900);
  const double theta = 0.37;
  const SymTensor3 w = apply_rotation(a, 1, 3, theta);
  for (int k : {0, 2, 4}) CHECK(w(k, k, k) == a(k, k, k));
  CHECK_THAT(rotation_objective(a, 1, 3, theta),
             Catch::Matchers::WithinRel(w.diagNormSq(), 1e-13));
}
