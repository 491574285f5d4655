#pragma once

// The dimension-3 gap between the symmetric and three-factor diagonal
// objectives: the row-product function rho, the tan-parameterized rotation
// factorization, the stationary-point analysis of its maximum, and the n = 2
// certificate that no such gap exists.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "symdiag/jacobi.hpp"
#include "symdiag/ortho.hpp"
#include "symdiag/tensor.hpp"
#include "symdiag/trifactor.hpp"

namespace symdiag {

/// The fully symmetric permutation tensor on three indices: A_{ijk} = 1 when
/// {i,j,k} = {1,2,3}, zero otherwise.
inline SymTensor3 symmetrizer_123() {
  SymTensor3 a(3);
  a.set(0, 1, 2, 1.0);
  return a;
}

/// rho(Q) = sum of the row products Q_i1^2 Q_i2^2 Q_i3^2, for 3x3 Q.
inline double rho(const Matrix& Q) {
  if (Q.rows() != 3 || Q.cols() != 3) throw std::invalid_argument("rho: n must be 3");
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    s += Q(i, 0) * Q(i, 0) * Q(i, 1) * Q(i, 1) * Q(i, 2) * Q(i, 2);
  return s;
}

// The three tan-parameterized factor rotations; x = +-inf gives the
// quarter-turn limit of the corresponding factor.
inline Matrix factor_rotation_1(double x) {
  double c, s;
  if (std::isinf(x)) {
    c = 0.0;
    s = x > 0 ? 1.0 : -1.0;
  } else {
    c = 1.0 / std::sqrt(1.0 + x * x);
    s = x * c;
  }
  Matrix m = Matrix::Identity(3, 3);
  m(1, 1) = c;
  m(1, 2) = -s;
  m(2, 1) = s;
  m(2, 2) = c;
  return m;
}

inline Matrix factor_rotation_2(double y) {
  double c, s;
  if (std::isinf(y)) {
    c = 0.0;
    s = y > 0 ? 1.0 : -1.0;
  } else {
    c = 1.0 / std::sqrt(1.0 + y * y);
    s = y * c;
  }
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return m;
}

inline Matrix factor_rotation_3(double z) {
  double c, s;
  if (std::isinf(z)) {
    c = 0.0;
    s = z > 0 ? 1.0 : -1.0;
  } else {
    c = 1.0 / std::sqrt(1.0 + z * z);
    s = z * c;
  }
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = c;
  m(0, 2) = -s;
  m(2, 0) = s;
  m(2, 2) = c;
  return m;
}

struct EulerFactors {
  double x = 0.0, y = 0.0, z = 0.0;  // tan parameters; +-inf marks quarter turns
  Matrix column_signs;               // diagonal +-1 matrix, det +1
  double reconstruction_error = 0.0;
  bool gimbal_singular = false;

  Matrix reconstruct() const {
    return factor_rotation_1(x) * factor_rotation_2(y) * factor_rotation_3(z) * column_signs;
  }
};

/// Decomposes Q^T = Q1(x) Q2(y) Q3(z) D for Q in SO(3), where D is a diagonal
/// sign matrix with det +1. The half-angle tan charts cover SO(3) only up to
/// column signs, and rho is invariant under them.
inline EulerFactors euler_factor(const Matrix& Q) {
  if (Q.rows() != 3 || Q.cols() != 3 || Q.determinant() < 0.0)
    throw std::invalid_argument("euler_factor: need Q in SO(3)");
  const Matrix N = Q.transpose();
  EulerFactors ef;
  ef.column_signs = Matrix::Identity(3, 3);
  const double inf = std::numeric_limits<double>::infinity();

  // Structure of M = Q1 Q2 Q3 (all cosines nonnegative):
  //   M(0,0) = c2 c3,  M(0,1) = -s2,    M(0,2) = -c2 s3
  //   M(1,1) = c1 c2,  M(2,1) = s1 c2
  const double c2 = std::sqrt(N(0, 0) * N(0, 0) + N(0, 2) * N(0, 2));
  if (c2 > 1e-12) {
    const double sgn1 = N(0, 0) >= 0.0 ? 1.0 : -1.0;  // column-0 sign
    const double sgn2 = N(1, 1) >= 0.0 ? 1.0 : -1.0;  // column-1 sign
    const double c1 = sgn2 * N(1, 1) / c2;
    const double s1 = sgn2 * N(2, 1) / c2;
    ef.x = c1 > 1e-300 ? s1 / c1 : (s1 >= 0 ? inf : -inf);
    ef.y = -sgn2 * N(0, 1) / c2;
    const double c3 = sgn1 * N(0, 0) / c2;
    const double s3 = -sgn1 * sgn2 * N(0, 2) / c2;
    ef.z = c3 > 1e-300 ? s3 / c3 : (s3 >= 0 ? inf : -inf);
    Matrix d = Matrix::Identity(3, 3);
    d(0, 0) = sgn1;
    d(1, 1) = sgn2;
    d(2, 2) = sgn1 * sgn2;
    ef.column_signs = d;
  } else {
    // Gimbal chart: theta2 = +-pi/2; fold the third angle into the first,
    // since Q2(pi/2) Q3(t) = Q1(t) Q2(pi/2).
    ef.gimbal_singular = true;
    const double sgn2 = -N(0, 1) >= 0.0 ? 1.0 : -1.0;  // sign of s2
    ef.y = sgn2 > 0 ? inf : -inf;
    ef.z = 0.0;
    // With c2 = 0, c3 = 1, s3 = 0: N(1,0) = c1 s2, N(2,0) = s1 s2.
    const double c1 = N(1, 0) * sgn2;
    const double s1 = N(2, 0) * sgn2;
    if (c1 >= 0.0) {
      ef.x = c1 > 1e-300 ? s1 / c1 : (s1 >= 0 ? inf : -inf);
    } else {
      // Half-turn excess on the first factor folds into column signs.
      ef.x = s1 / c1;
      Matrix d = Matrix::Identity(3, 3);
      d(0, 0) = -1.0;
      d(2, 2) = -1.0;
      ef.column_signs = d;
    }
  }
  ef.reconstruction_error = (N - ef.reconstruct()).cwiseAbs().maxCoeff();
  return ef;
}

/// Closed form of rho on the factored chart (finite x, y, z).
inline double rho_chart(double x, double y, double z) {
  const double x2 = x * x, y2 = y * y, z2 = z * z;
  const double num = (y2 * y2 * z2 + y2 * z2) * (x2 * x2 + 1.0) +
                     2.0 * std::sqrt(y2 + 1.0) * y * y2 * (z * z2 - z) * (x * x2 - x) +
                     (y2 * y2 * z2 * z2 - 4.0 * y2 * y2 * z2 + y2 * y2 + y2 * z2 * z2 + y2 +
                      z2) *
                         x2;
  const double den =
      (1.0 + x2) * (1.0 + x2) * (1.0 + y2) * (1.0 + y2) * (1.0 + y2) * (1.0 + z2) * (1.0 + z2);
  return num / den;
}

struct RhoAnalysis {
  std::vector<double> cubic_roots;  // positive roots of 16 t^3 - 11 t + 2 in t = y^2
  std::vector<double> u_squared;    // matching u^2 values
  std::vector<double> phi_values;   // objective at the interior stationary points
  double bound = 1.0 / 12.0;
  double rho_sup_found = 0.0;  // numeric certificate from multi-start search
  Matrix best_Q;

  RhoAnalysis() : best_Q(Matrix::Identity(3, 3)) {}
};

/// phi(u, y) from its definition.
inline double phi_value(double u2, double y2) {
  const double t = 1.0 + y2;
  return (4.0 * y2 * u2 * t + 4.0 * y2 + 1.0) / ((u2 + 4.0) * (u2 + 4.0) * t * t * t);
}

/// Rodrigues formula for the exponential of a 3x3 skew matrix.
inline Matrix skew_exp3(const Matrix& S) {
  const double a = S(2, 1), b = S(0, 2), c = S(1, 0);
  const double th = std::sqrt(a * a + b * b + c * c);
  if (th < 1e-300) return Matrix::Identity(3, 3);
  const Matrix K = S / th;
  return Matrix::Identity(3, 3) + std::sin(th) * K + (1.0 - std::cos(th)) * (K * K);
}

/// Projected gradient ascent on rho over SO(3) from a given start.
inline double maximize_rho_from(Matrix Q, Matrix* arg = nullptr, int max_iter = 300) {
  double cur = rho(Q);
  double step = 0.1;
  for (int it = 0; it < max_iter; ++it) {
    Matrix G(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        G(i, j) = 2.0 * Q(i, j) * Q(i, j1) * Q(i, j1) * Q(i, j2) * Q(i, j2);
      }
    const Matrix QtG = Q.transpose() * G;
    const Matrix skew = 0.5 * (QtG - QtG.transpose());
    const double gnorm = skew.norm();
    if (gnorm < 1e-14) break;
    bool improved = false;
    while (step > 1e-14) {
      // Rotation-geodesic trial step via the exponential of the tangent.
      const Matrix trial = Q * skew_exp3(step * skew);
      const double val = rho(trial);
      if (val > cur) {
        Q = trial;
        cur = val;
        step *= 1.5;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  if (arg) *arg = Q;
  return cur;
}

/// Stationary-point analysis of max rho: positive roots of the reduced cubic,
/// their phi values, and a seeded multi-start numeric maximization.
inline RhoAnalysis appendix_maximize(int starts = 10000, std::uint64_t seed = 20240601) {
  RhoAnalysis res;
  // 16 t^3 + 0 t^2 - 11 t + 2 = 0, companion matrix roots, t > 0 kept.
  Matrix comp = Matrix::Zero(3, 3);
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  comp(0, 2) = -2.0 / 16.0;
  comp(1, 2) = 11.0 / 16.0;
  comp(2, 2) = 0.0;
  Eigen::EigenSolver<Matrix> es(comp, false);
  for (int r = 0; r < 3; ++r) {
    const auto z = es.eigenvalues()(r);
    if (std::abs(z.imag()) <= 1e-10 && z.real() > 0.0) res.cubic_roots.push_back(z.real());
  }
  std::sort(res.cubic_roots.begin(), res.cubic_roots.end(), std::greater<double>());
  for (double t : res.cubic_roots) {
    const double u2 = (8.0 * t * t + 4.0 * t - 1.0) / (2.0 * t * (t + 1.0));
    res.u_squared.push_back(u2);
    res.phi_values.push_back(phi_value(u2, t));
  }
  Rng rng(seed);
  for (int s = 0; s < starts; ++s) {
    Matrix arg;
    const double val = maximize_rho_from(random_orthogonal(3, rng), &arg);
    if (val > res.rho_sup_found) {
      res.rho_sup_found = val;
      res.best_Q = arg;
    }
  }
  return res;
}

struct CounterexampleReport {
  double F_star = 0.0;          // three-factor value at the permutation factors
  double max_identity_err = 0;  // max |f(Q) - 36 rho(Q)| over sampled Q
  double f_sup_found = 0.0;     // multi-start sup of the symmetric objective
  double rho_sup_found = 0.0;
  double bound = 1.0 / 12.0;
  std::vector<double> cubic_roots;
  std::vector<double> phi_values;
  bool pass = false;
};

/// Reproduces the strict gap f(Q) < 3 = F(P*,Q*,R*) for the 123-symmetrizer.
inline CounterexampleReport verify_counterexample(int identity_samples = 1000,
                                                  int rho_starts = 10000,
                                                  std::uint64_t seed = 777) {
  CounterexampleReport rep;
  const SymTensor3 A = symmetrizer_123();

  Matrix P = Matrix::Identity(3, 3);
  Matrix Q(3, 3), R(3, 3);
  Q << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  R << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  rep.F_star = trifactor_value(A, P, Q, R);

  Rng rng(seed);
  for (int s = 0; s < identity_samples; ++s) {
    const Matrix O = random_orthogonal(3, rng, /*special=*/false);
    rep.max_identity_err =
        std::max(rep.max_identity_err, std::abs(cost_f(A, O) - 36.0 * rho(O)));
  }

  const RhoAnalysis ra = appendix_maximize(rho_starts, seed + 1);
  rep.rho_sup_found = ra.rho_sup_found;
  rep.f_sup_found = 36.0 * ra.rho_sup_found;
  rep.cubic_roots = ra.cubic_roots;
  rep.phi_values = ra.phi_values;

  rep.pass = std::abs(rep.F_star - 3.0) <= 1e-12 && rep.max_identity_err <= 1e-12 &&
             rep.f_sup_found < 3.0 && rep.rho_sup_found < rep.bound;
  return rep;
}

/// sigma(x,y,z) from the n = 2 certificate; nonpositive exactly when the
/// three-factor objective cannot beat the symmetric one.
inline double dim2_sigma(double gamma, double x, double y, double z) {
  return (gamma - 1.0) * (x * x + y * y + z * z + x * x * y * y + y * y * z * z +
                          z * z * x * x) +
         2.0 * gamma * (x * x * y * z + x * y * y * z + x * y * z * z + x * y + y * z + z * x);
}

struct Dim2Report {
  double max_sigma = -std::numeric_limits<double>::infinity();
  double max_F_excess = -std::numeric_limits<double>::infinity();  // max F - (a^2 + d^2)
  bool pass = false;
};

/// Certifies GMD = MD at n = 2 for a JD tensor given by (a, d, gamma):
/// sigma <= 0 on a grid plus random samples, and the direct three-factor
/// evaluation never exceeds a^2 + d^2.
inline Dim2Report verify_dim2_gmd_equals_md(double a, double d, double gamma, int grid = 50,
                                            int random_samples = 10000,
                                            std::uint64_t seed = 99) {
  if (gamma < -1.0 || gamma > 1.0 / 3.0)
    throw std::invalid_argument("verify_dim2_gmd_equals_md: gamma outside [-1, 1/3]");
  SymTensor3 A(2);
  A.set(0, 0, 0, a);
  A.set(1, 1, 1, d);
  A.set(0, 1, 1, gamma * a);
  A.set(0, 0, 1, gamma * d);

  auto rot2 = [](double t) {
    Matrix m(2, 2);
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    m << c, -t * c, t * c, c;
    return m;
  };

  Dim2Report rep;
  const double lo = -5.0, hi = 5.0;
  Rng rng(seed);
  auto probe = [&](double x, double y, double z, bool with_F) {
    rep.max_sigma = std::max(rep.max_sigma, dim2_sigma(gamma, x, y, z));
    if (with_F) {
      const double F = contract_modes(A, rot2(x), rot2(y), rot2(z)).diagNormSq();
      rep.max_F_excess = std::max(rep.max_F_excess, F - (a * a + d * d));
    }
  };
  for (int ix = 0; ix < grid; ++ix)
    for (int iy = 0; iy < grid; ++iy)
      for (int iz = 0; iz < grid; ++iz) {
        const double x = lo + (hi - lo) * ix / (grid - 1);
        const double y = lo + (hi - lo) * iy / (grid - 1);
        const double z = lo + (hi - lo) * iz / (grid - 1);
        probe(x, y, z, (ix + iy + iz) % 25 == 0);  // direct F on a subsample
      }
  for (int s = 0; s < random_samples; ++s)
    probe(lo + (hi - lo) * rng.uniform(), lo + (hi - lo) * rng.uniform(),
          lo + (hi - lo) * rng.uniform(), true);
  rep.pass = rep.max_sigma <= 1e-12 && rep.max_F_excess <= 1e-9;
  return rep;
}

}  // namespace symdiag
