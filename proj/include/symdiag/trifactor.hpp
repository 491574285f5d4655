#pragma once

// Alternating Jacobi maximization of the three-factor diagonal objective
// F(P,Q,R) = ||diag(A x1 P^T x2 Q^T x3 R^T)||^2.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "symdiag/jacobi.hpp"
#include "symdiag/ortho.hpp"
#include "symdiag/tensor.hpp"

namespace symdiag {

struct TriFactorConfig {
  int max_sweeps = 500;
  double stop_tol = 1e-13;  // on total gain over a full sweep of all modes
  int restarts = 1;         // random initial factors beyond the identity start
  std::uint64_t seed = 0;
  bool symmetric_constrained = false;  // force P = Q = R (delegates to jacobi_com)
};

struct TriFactorResult {
  Matrix P, Q, R;
  double F_value = 0.0;
  std::vector<double> sweep_gains;
  bool converged = false;

  explicit TriFactorResult(int n)
      : P(Matrix::Identity(n, n)), Q(Matrix::Identity(n, n)), R(Matrix::Identity(n, n)) {}
};

inline double trifactor_value(const SymTensor3& A, const Matrix& P, const Matrix& Q,
                              const Matrix& R) {
  return contract_modes(A, P, Q, R).diagNormSq();
}

namespace detail {

// Exact maximization of one single-mode Givens rotation. Only the diagonal
// entries (i,i,i) and (j,j,j) change; each new entry is a linear combination
// of two pre-rotation entries, so the objective is a 2x2 quadratic form in
// (cos t, sin t) maximized by its top eigenvector.
inline double trifactor_pair_update(Tensor3& T, Matrix& F, int mode, int i, int j) {
  const int n = T.dim();
  auto entry = [&](int a, int b, int c) { return T(a, b, c); };
  double a1, b1, a2, b2;
  if (mode == 0) {
    a1 = entry(i, i, i);
    b1 = entry(j, i, i);
    a2 = entry(j, j, j);
    b2 = entry(i, j, j);
  } else if (mode == 1) {
    a1 = entry(i, i, i);
    b1 = entry(i, j, i);
    a2 = entry(j, j, j);
    b2 = entry(j, i, j);
  } else {
    a1 = entry(i, i, i);
    b1 = entry(i, i, j);
    a2 = entry(j, j, j);
    b2 = entry(j, j, i);
  }
  // New diagonals: c*a1 + s*b1 and c*a2 - s*b2.
  Eigen::Matrix2d M;
  M(0, 0) = a1 * a1 + a2 * a2;
  M(0, 1) = M(1, 0) = a1 * b1 - a2 * b2;
  M(1, 1) = b1 * b1 + b2 * b2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(M);
  const double lam = es.eigenvalues()(1);
  const double gain = lam - M(0, 0);
  if (gain <= 0.0) return 0.0;
  Eigen::Vector2d v = es.eigenvectors().col(1);
  if (v(0) < 0.0) v = -v;  // smallest-angle representative
  const double c = v(0), s = v(1);

  // Apply the rotation to the working tensor and accumulate the factor.
  Tensor3 upd = T;
  for (int b = 0; b < n; ++b)
    for (int cidx = 0; cidx < n; ++cidx) {
      double ti, tj;
      if (mode == 0) {
        ti = T(i, b, cidx);
        tj = T(j, b, cidx);
      } else if (mode == 1) {
        ti = T(b, i, cidx);
        tj = T(b, j, cidx);
      } else {
        ti = T(b, cidx, i);
        tj = T(b, cidx, j);
      }
      const double ni = c * ti + s * tj;
      const double nj = -s * ti + c * tj;
      if (mode == 0) {
        upd(i, b, cidx) = ni;
        upd(j, b, cidx) = nj;
      } else if (mode == 1) {
        upd(b, i, cidx) = ni;
        upd(b, j, cidx) = nj;
      } else {
        upd(b, cidx, i) = ni;
        upd(b, cidx, j) = nj;
      }
    }
  T = upd;
  Matrix g = Matrix::Identity(n, n);
  g(i, i) = c;
  g(j, j) = c;
  g(j, i) = s;
  g(i, j) = -s;
  F = F * g;
  return gain;
}

inline TriFactorResult trifactor_single(const SymTensor3& A, const TriFactorConfig& cfg,
                                        const Matrix& P0, const Matrix& Q0, const Matrix& R0) {
  const int n = A.dim();
  TriFactorResult res(n);
  res.P = P0;
  res.Q = Q0;
  res.R = R0;
  Tensor3 T = contract_modes(A, P0, Q0, R0);
  const auto pairs = cyclic_pairs(n);
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double gain = 0.0;
    for (int mode = 0; mode < 3; ++mode) {
      Matrix& F = mode == 0 ? res.P : (mode == 1 ? res.Q : res.R);
      for (const auto& [i, j] : pairs) gain += trifactor_pair_update(T, F, mode, i, j);
    }
    res.sweep_gains.push_back(gain);
    if (gain <= cfg.stop_tol) {
      res.converged = true;
      break;
    }
  }
  res.F_value = T.diagNormSq();
  return res;
}

}  // namespace detail

/// Alternating per-mode Jacobi sweeps; F is nondecreasing. With restarts > 1,
/// seeded random initial factors are tried and the best run is returned.
inline TriFactorResult maximize_trifactor(const SymTensor3& A, const TriFactorConfig& cfg = {}) {
  const int n = A.dim();
  if (n < 2) throw std::invalid_argument("maximize_trifactor: n must be at least 2");
  if (cfg.symmetric_constrained) {
    JacobiConfig jc;
    jc.stop_tol = 1e-13;
    const JacobiTrace t = jacobi_com(A, jc);
    TriFactorResult res(n);
    res.P = res.Q = res.R = t.Q;
    res.F_value = t.f_final;
    res.converged = t.converged;
    return res;
  }
  const Matrix id = Matrix::Identity(n, n);
  TriFactorResult best = detail::trifactor_single(A, cfg, id, id, id);
  for (int r = 1; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
    const Matrix p = random_orthogonal(n, rng);
    const Matrix q = random_orthogonal(n, rng);
    const Matrix rr = random_orthogonal(n, rng);
    TriFactorResult cand = detail::trifactor_single(A, cfg, p, q, rr);
    if (cand.F_value > best.F_value) best = cand;
  }
  return best;
}

}  // namespace symdiag
