#pragma once

// Single-pair rotation machinery: the quantities d and omega, the rational
// form of the per-pair objective in x = tan(theta), and its exact global
// maximization via the stationarity quartic.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symdiag/tensor.hpp"

namespace symdiag {

struct PairStats {
  int i = 0;
  int j = 0;
  double d = 0.0;
  double omega = 0.0;
};

/// d = A_iii*A_iij - A_ijj*A_jjj and
/// omega = A_iii^2 + A_jjj^2 - 3A_iij^2 - 3A_ijj^2 - 2A_iii*A_ijj - 2A_iij*A_jjj.
inline PairStats pair_stats(const SymTensor3& A, int i, int j) {
  if (i < 0 || j <= i || j >= A.dim()) throw std::invalid_argument("pair_stats: bad pair");
  const double aiii = A(i, i, i), aiij = A(i, i, j), aijj = A(i, j, j), ajjj = A(j, j, j);
  PairStats s;
  s.i = i;
  s.j = j;
  s.d = aiii * aiij - aijj * ajjj;
  s.omega = aiii * aiii + ajjj * ajjj - 3.0 * aiij * aiij - 3.0 * aijj * aijj -
            2.0 * aiii * aijj - 2.0 * aiij * ajjj;
  return s;
}

/// Objective increment tau(x) - tau(0) = 3/(1+x^2)^2 (2d(x - x^3) - omega x^2).
/// x may be +-infinity (the theta = pi/2 point), where the increment is 0.
inline double rotation_gain(double d, double omega, double x) {
  if (std::isinf(x)) return 0.0;
  const double t = 1.0 + x * x;
  return 3.0 / (t * t) * (2.0 * d * (x - x * x * x) - omega * x * x);
}

/// tau'(x) = 6/(1+x^2)^3 (d(1 - 6x^2 + x^4) - omega(x - x^3)).
inline double rotation_gain_derivative(double d, double omega, double x) {
  if (std::isinf(x)) return 0.0;
  const double t = 1.0 + x * x;
  const double x2 = x * x;
  return 6.0 / (t * t * t) * (d * (1.0 - 6.0 * x2 + x2 * x2) - omega * (x - x * x2));
}

struct AngleSolution {
  double x_star = 0.0;  // tan(theta*); +-inf encodes theta* = pi/2
  double gain = 0.0;    // tau(x*) - tau(0), always >= 0
  std::vector<double> candidates;

  double theta() const { return std::atan(x_star); }  // atan(inf) = pi/2
};

/// Global maximizer of the per-pair objective over x in R union {inf}.
/// Candidates: real roots of d(1-6x^2+x^4) - omega(x-x^3) = 0, plus x = 0 and
/// the at-infinity point. Ties go to the smallest |theta|.
inline AngleSolution optimal_angle(const PairStats& stats, bool restrict_quarter_pi = false) {
  const double d = stats.d, omega = stats.omega;
  AngleSolution sol;
  sol.candidates.push_back(0.0);
  sol.candidates.push_back(std::numeric_limits<double>::infinity());

  // Stationarity polynomial q(x) = d(1 - 6x^2 + x^4) - omega(x - x^3) = 0.
  const double scale = std::max(std::abs(d), std::abs(omega));
  if (scale > 0.0) {
    std::vector<double> coeff;  // highest degree first
    if (std::abs(d) > 1e-14 * scale) {
      coeff = {d, omega, -6.0 * d, -omega, d};
    } else if (std::abs(omega) > 0.0) {
      // omega x (x^2 - 1) = 0
      sol.candidates.push_back(1.0);
      sol.candidates.push_back(-1.0);
    }
    if (!coeff.empty()) {
      const int deg = static_cast<int>(coeff.size()) - 1;
      Matrix comp = Matrix::Zero(deg, deg);
      for (int r = 1; r < deg; ++r) comp(r, r - 1) = 1.0;
      for (int r = 0; r < deg; ++r) comp(r, deg - 1) = -coeff[deg - r] / coeff[0];
      Eigen::EigenSolver<Matrix> es(comp, false);
      for (int r = 0; r < deg; ++r) {
        const auto z = es.eigenvalues()(r);
        if (std::abs(z.imag()) <= 1e-10 * (1.0 + std::abs(z.real())))
          sol.candidates.push_back(z.real());
      }
      // With |d| << |omega| the companion matrix has norm ~ |omega/d|, and
      // its absolute eigenvalue error swamps the smallest root (~ d/omega),
      // often pushing it off the real axis. Seed it explicitly and polish
      // every candidate with Newton steps on q.
      if (std::abs(omega) > 0.0) sol.candidates.push_back(d / omega);
      auto qval = [&](double x) {
        const double x2 = x * x;
        return d * (1.0 - 6.0 * x2 + x2 * x2) - omega * (x - x * x2);
      };
      auto qder = [&](double x) {
        const double x2 = x * x;
        return d * (-12.0 * x + 4.0 * x * x2) - omega * (1.0 - 3.0 * x2);
      };
      for (double& x : sol.candidates) {
        if (!std::isfinite(x)) continue;
        for (int it = 0; it < 40; ++it) {
          const double der = qder(x);
          if (der == 0.0) break;
          const double step = qval(x) / der;
          if (!std::isfinite(step)) break;
          x -= step;
          if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
        }
      }
    }
  }

  if (restrict_quarter_pi) {
    std::vector<double> kept;
    for (double x : sol.candidates)
      if (std::abs(x) <= 1.0) kept.push_back(x);
    kept.push_back(1.0);
    kept.push_back(-1.0);  // interval ends
    sol.candidates = std::move(kept);
  }

  // Smallest |theta| first so that later candidates must strictly improve.
  std::sort(sol.candidates.begin(), sol.candidates.end(),
            [](double a, double b) { return std::abs(std::atan(a)) < std::abs(std::atan(b)); });

  sol.x_star = 0.0;
  sol.gain = 0.0;
  for (double x : sol.candidates) {
    const double g = rotation_gain(d, omega, x);
    if (g > sol.gain) {
      sol.gain = g;
      sol.x_star = x;
    }
  }
  return sol;
}

/// contract_all(A, G(i,j,theta)) via the O(n^2) in-place pair update.
inline SymTensor3 apply_rotation(const SymTensor3& A, int i, int j, double theta) {
  if (i < 0 || j <= i || j >= A.dim()) throw std::invalid_argument("apply_rotation: bad pair");
  const int n = A.dim();
  const double c = std::cos(theta), s = std::sin(theta);
  SymTensor3 w = A;

  // Entries with exactly one index in {i,j}.
  for (int q = 0; q < n; ++q) {
    if (q == i || q == j) continue;
    for (int r = q; r < n; ++r) {
      if (r == i || r == j) continue;
      const double ai = A(i, q, r), aj = A(j, q, r);
      w.set(i, q, r, c * ai + s * aj);
      w.set(j, q, r, -s * ai + c * aj);
    }
  }

  // Two indices in {i,j}: 2x2 congruence on each slice q.
  for (int q = 0; q < n; ++q) {
    if (q == i || q == j) continue;
    const double aii = A(i, i, q), aij = A(i, j, q), ajj = A(j, j, q);
    w.set(i, i, q, c * c * aii + 2.0 * c * s * aij + s * s * ajj);
    w.set(i, j, q, c * s * (ajj - aii) + (c * c - s * s) * aij);
    w.set(j, j, q, s * s * aii - 2.0 * c * s * aij + c * c * ajj);
  }

  // The pure {i,j} block: cubic formulas in (c, s).
  {
    const double a = A(i, i, i), b = A(i, i, j), e = A(i, j, j), d = A(j, j, j);
    w.set(i, i, i, c * c * c * a + 3.0 * c * c * s * b + 3.0 * c * s * s * e + s * s * s * d);
    w.set(i, i, j, -c * c * s * a + (c * c * c - 2.0 * c * s * s) * b +
                       (2.0 * c * c * s - s * s * s) * e + c * s * s * d);
    w.set(i, j, j, c * s * s * a + (s * s * s - 2.0 * c * c * s) * b +
                       (c * c * c - 2.0 * c * s * s) * e + c * c * s * d);
    w.set(j, j, j, -s * s * s * a + 3.0 * c * s * s * b - 3.0 * c * c * s * e + c * c * c * d);
  }
  return w;
}

/// Full diagonal-norm^2 after rotating A by G(i,j,theta) on all three modes.
inline double rotation_objective(const SymTensor3& A, int i, int j, double theta) {
  // Only the (i,i,i) and (j,j,j) diagonal entries move.
  const int n = A.dim();
  const double c = std::cos(theta), s = std::sin(theta);
  const double a = A(i, i, i), b = A(i, i, j), e = A(i, j, j), d = A(j, j, j);
  const double wiii = c * c * c * a + 3.0 * c * c * s * b + 3.0 * c * s * s * e + s * s * s * d;
  const double wjjj = -s * s * s * a + 3.0 * c * s * s * b - 3.0 * c * c * s * e + c * c * c * d;
  double f = wiii * wiii + wjjj * wjjj;
  for (int k = 0; k < n; ++k)
    if (k != i && k != j) f += A(k, k, k) * A(k, k, k);
  return f;
}

}  // namespace symdiag
