#pragma once

// Seeded tensor generators.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "symdiag/ortho.hpp"
#include "symdiag/tensor.hpp"

namespace symdiag {

inline SymTensor3 from_weights_and_basis(const std::vector<double>& weights, const Matrix& U) {
  const int n = static_cast<int>(U.rows());
  if (static_cast<int>(weights.size()) != n || U.cols() != n)
    throw std::invalid_argument("from_weights_and_basis: dimension mismatch");
  SymTensor3 a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int t = 0; t < n; ++t) s += weights[t] * U(i, t) * U(j, t) * U(k, t);
        a.set(i, j, k, s);
      }
  return a;
}

inline SymTensor3 random_symmetric(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_symmetric: n must be at least 2");
  Rng rng(seed);
  SymTensor3 a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) a.set(i, j, k, rng.normal());
  return a;
}

/// Exactly orthogonally decomposable tensor with n distinct nonzero weights.
inline SymTensor3 random_odeco(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_odeco: n must be at least 2");
  Rng rng(seed);
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) {
    // Spread magnitudes so the weights are distinct and well separated.
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    w[k] = sign * (0.5 + k * 0.35 + 0.25 * rng.uniform());
  }
  const Matrix u = random_orthogonal(n, rng);
  return from_weights_and_basis(w, u);
}

/// Pseudo diagonal tensor: entries A_{iij}, A_{ijj} are exactly zero.
inline SymTensor3 random_pd(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_pd: n must be at least 2");
  Rng rng(seed);
  SymTensor3 a(n);
  for (int i = 0; i < n; ++i) a.set(i, i, i, rng.normal());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) a.set(i, j, k, rng.normal());
  return a;
}

/// Dimension-4 tensor with unit diagonal and all distinct-index entries 3/4.
/// Pseudo diagonal but not a local maximizer of the diagonal-norm objective.
inline SymTensor3 pd4_threequarters() {
  SymTensor3 a(4);
  for (int i = 0; i < 4; ++i) a.set(i, i, i, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) a.set(i, j, k, 0.75);
  return a;
}

/// Dimension-3 stationary diagonal family: unit diagonal, every pattern entry
/// equal to gamma, and distinct-index entry g.
inline SymTensor3 lmd3_example(double g, double gamma) {
  SymTensor3 a(3);
  for (int i = 0; i < 3; ++i) a.set(i, i, i, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const int lo = std::min(i, j), hi = std::max(i, j);
      a.set(lo, hi, hi, gamma);
      a.set(lo, lo, hi, gamma);
    }
  a.set(0, 1, 2, g);
  return a;
}

}  // namespace symdiag
