#pragma once

// Certified membership tests for the approximate-diagonality classes and the
// second-order (Hessian form) local-maximality certificates.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symdiag/jacobi.hpp"
#include "symdiag/ortho.hpp"
#include "symdiag/rotation.hpp"
#include "symdiag/tensor.hpp"

namespace symdiag {

struct ToleranceProfile {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  double eig_tol_factor = 1e-8;  // eig_tol = factor * ||H||_F
};

struct StationaryRatio {
  enum class Kind { Finite, ZeroSubtensor, Infinite };
  int i = 0;
  int j = 0;
  Kind kind = Kind::Finite;
  double gamma = 0.0;  // valid when kind == Finite
};

inline bool is_pseudo_diagonal(const SymTensor3& A, double tol) {
  const double scale = A.norm();
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) {
      if (i == j) continue;
      if (std::abs(A(i, i, j)) > tol * scale) return false;
    }
  return true;
}

struct SdVerdict {
  bool sd = false;
  double residual = 0.0;  // max |d_{i,j}|
};

inline SdVerdict is_stationary_diagonal(const SymTensor3& A, double tol) {
  SdVerdict v;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j)
      v.residual = std::max(v.residual, std::abs(pair_stats(A, i, j).d));
  v.sd = v.residual <= tol * std::max(A.normSq(), 1e-300);
  return v;
}

/// Per-pair stationary diagonal ratios; requires an SD input.
/// gamma is fit by least squares over the two defining equations
/// A_ijj = gamma A_iii and A_iij = gamma A_jjj.
inline std::vector<StationaryRatio> stationary_ratios(const SymTensor3& A,
                                                      const ToleranceProfile& tp = {}) {
  if (!is_stationary_diagonal(A, tp.rel_tol).sd)
    throw std::invalid_argument("stationary_ratios: input is not stationary diagonal");
  const double scale = std::max(A.norm(), 1e-300);
  std::vector<StationaryRatio> out;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j) {
      StationaryRatio r;
      r.i = i;
      r.j = j;
      const double aiii = A(i, i, i), ajjj = A(j, j, j);
      const double aiij = A(i, i, j), aijj = A(i, j, j);
      const std::vector<int> ij = {i, j};
      if (subtensor(A, ij).norm() <= tp.rel_tol * scale) {
        r.kind = StationaryRatio::Kind::ZeroSubtensor;
        r.gamma = 0.0;
      } else if (std::abs(aiii) <= tp.rel_tol * scale && std::abs(ajjj) <= tp.rel_tol * scale) {
        r.kind = StationaryRatio::Kind::Infinite;
      } else {
        r.kind = StationaryRatio::Kind::Finite;
        r.gamma = (aijj * aiii + aiij * ajjj) / (aiii * aiii + ajjj * ajjj);
      }
      out.push_back(r);
    }
  return out;
}

struct JdEvidence {
  bool jd = false;
  bool sd = false;
  double sd_residual = 0.0;
  double min_omega = 0.0;
  // Per-pair gamma route (when the ratio is finite) must agree with the omega
  // sign route via -omega = (3g^2 + 2g - 1)(A_iii^2 + A_jjj^2).
  std::vector<StationaryRatio> ratios;
  bool routes_agree = true;
};

inline JdEvidence is_jacobi_diagonal(const SymTensor3& A, double tol) {
  JdEvidence ev;
  const SdVerdict sd = is_stationary_diagonal(A, tol);
  ev.sd = sd.sd;
  ev.sd_residual = sd.residual;
  bool first = true;
  bool omega_ok = true;
  const double scale = std::max(A.normSq(), 1e-300);
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j) {
      const PairStats st = pair_stats(A, i, j);
      if (first || st.omega < ev.min_omega) ev.min_omega = st.omega;
      first = false;
      if (st.omega < -tol * scale) omega_ok = false;
    }
  ev.jd = ev.sd && omega_ok;
  if (ev.sd) {
    ToleranceProfile tp;
    tp.rel_tol = tol;
    ev.ratios = stationary_ratios(A, tp);
    for (const auto& r : ev.ratios) {
      if (r.kind != StationaryRatio::Kind::Finite) continue;
      const bool gamma_in = r.gamma >= -1.0 - tol && r.gamma <= 1.0 / 3.0 + tol;
      const double o = pair_stats(A, r.i, r.j).omega;
      const bool omega_in = o >= -tol * scale;
      // Boundary values may flip either test within tolerance; only flag a
      // disagreement when both verdicts are clear of the boundary.
      const double margin =
          std::abs(3.0 * r.gamma * r.gamma + 2.0 * r.gamma - 1.0) *
          (A(r.i, r.i, r.i) * A(r.i, r.i, r.i) + A(r.j, r.j, r.j) * A(r.j, r.j, r.j));
      if (margin > 10.0 * tol * scale && gamma_in != omega_in) ev.routes_agree = false;
    }
  }
  return ev;
}

struct HessianForm {
  Matrix H;  // m x m, m = n(n-1)/2, over strictly-upper skew coordinates
  double eig_min = 0.0;
  double eig_max = 0.0;
  Vector eig_max_vector;

  double value(const SkewMatrix& delta) const {
    const Vector xi = delta.coords();
    return xi.dot(H * xi);
  }
};

/// Matrix of the quadratic form Hess f(I_n)(Delta, Delta) over the
/// strictly-upper coordinates of Delta, in cyclic pair order.
inline HessianForm hessian_form_at_identity(const SymTensor3& A) {
  const int n = A.dim();
  const int m = n * (n - 1) / 2;
  Matrix B = Matrix::Zero(m, m);
  auto coord = [&](int a, int b, double& sign) {
    if (a < b) {
      sign = 1.0;
      return SkewMatrix::pairIndex(n, a, b);
    }
    sign = -1.0;
    return SkewMatrix::pairIndex(n, b, a);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double s1;
      const int p = coord(i, j, s1);
      const double c1 = 3.0 * A(i, j, j) * A(i, j, j) + 2.0 * A(j, j, j) * A(i, i, j) -
                        A(i, i, i) * A(i, i, i);
      B(p, p) += c1;  // s1^2 = 1
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        double s2;
        const int q = coord(k, j, s2);
        const double c2 = 3.0 * A(i, j, j) * A(k, j, j) + 2.0 * A(j, j, j) * A(i, k, j) -
                          A(k, i, i) * A(i, i, i);
        B(p, q) += c2 * s1 * s2;
      }
    }
  HessianForm form;
  form.H = 3.0 * (B + B.transpose());  // 6 * symmetric part
  Eigen::SelfAdjointEigenSolver<Matrix> es(form.H);
  form.eig_min = es.eigenvalues()(0);
  form.eig_max = es.eigenvalues()(m - 1);
  form.eig_max_vector = es.eigenvectors().col(m - 1);
  return form;
}

/// Direct evaluation of the Hessian form sums on a given skew direction,
/// without assembling the matrix. Used as the independent cross-check.
inline double hessian_form_direct(const SymTensor3& A, const SkewMatrix& delta) {
  const int n = A.dim();
  const Matrix D = delta.matrix();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      s += (3.0 * A(i, j, j) * A(i, j, j) + 2.0 * A(j, j, j) * A(i, i, j) -
            A(i, i, i) * A(i, i, i)) *
           D(i, j) * D(i, j);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        s += (3.0 * A(i, j, j) * A(k, j, j) + 2.0 * A(j, j, j) * A(i, k, j) -
              A(k, i, i) * A(i, i, i)) *
             D(i, j) * D(k, j);
      }
    }
  return 6.0 * s;
}

/// Riemannian Hessian form at an arbitrary Q along the tangent direction
/// Q Delta, via the intermediate tensors U, V, X, Y, Z.
inline double hessian_form_at(const SymTensor3& A, const Matrix& Q, const SkewMatrix& delta) {
  const int n = A.dim();
  if (Q.rows() != n || Q.cols() != n) throw std::invalid_argument("hessian_form_at: bad Q");
  const Matrix D = delta.matrix();
  const Matrix QD = Q * D;
  const Matrix QDD = Q * D * D;
  Tensor3 U = A.dense().contractMode(2, Q);
  Tensor3 V = U.contractMode(1, Q);
  const SymTensor3 W = contract_all(A, Q);
  Tensor3 X = V.contractMode(0, QD);
  Tensor3 Y = U.contractMode(0, QD).contractMode(1, QD);
  Tensor3 Z = V.contractMode(0, QDD);
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    s += 3.0 * X(j, j, j) * X(j, j, j) + 2.0 * Y(j, j, j) * W(j, j, j) +
         Z(j, j, j) * W(j, j, j);
  return 6.0 * s;
}

/// Euclidean Hessian matrix M_A for a JD tensor of dimension 3.
inline Matrix euclidean_hessian_matrix_3(const SymTensor3& A, const ToleranceProfile& tp = {}) {
  if (A.dim() != 3) throw std::invalid_argument("euclidean_hessian_matrix_3: n must be 3");
  const JdEvidence ev = is_jacobi_diagonal(A, tp.rel_tol);
  if (!ev.jd) throw std::invalid_argument("euclidean_hessian_matrix_3: input is not JD");
  double g12 = 0.0, g13 = 0.0, g23 = 0.0;
  for (const auto& r : ev.ratios) {
    if (r.kind == StationaryRatio::Kind::Infinite)
      throw std::invalid_argument("euclidean_hessian_matrix_3: infinite ratio");
    const double v = r.gamma;
    if (r.i == 0 && r.j == 1) g12 = v;
    if (r.i == 0 && r.j == 2) g13 = v;
    if (r.i == 1 && r.j == 2) g23 = v;
  }
  const double a = A(0, 0, 0), b = A(1, 1, 1), c = A(2, 2, 2), g = A(0, 1, 2);
  Matrix M(3, 3);
  M(0, 0) = (3 * g12 * g12 + 2 * g12 - 1) * (a * a + b * b);
  M(1, 1) = (3 * g13 * g13 + 2 * g13 - 1) * (c * c + a * a);
  M(2, 2) = (3 * g23 * g23 + 2 * g23 - 1) * (b * b + c * c);
  M(0, 1) = M(1, 0) = 2 * g * a + (3 * g12 * g13 - g23) * b * c;
  M(0, 2) = M(2, 0) = -2 * g * b - (3 * g23 * g12 - g13) * c * a;
  M(1, 2) = M(2, 1) = 2 * g * c + (3 * g13 * g23 - g12) * a * b;
  return M;
}

enum class LmdCertificate { DefiniteYes, DefiniteNo, Inconclusive };

struct LmdResult {
  LmdCertificate certificate = LmdCertificate::Inconclusive;
  std::optional<std::pair<int, int>> first_order_witness;  // pair with d != 0 or omega < 0
  std::optional<SkewMatrix> witness;                       // ascent direction when DefiniteNo
  double eig_min = 0.0;
  double eig_max = 0.0;
  double eig_tol = 0.0;
};

/// Second-order local-maximality certificate from the Hessian form spectrum.
/// At the semidefinite boundary the test is indeterminate and reports
/// Inconclusive rather than guessing.
inline LmdResult lmd_certificate(const SymTensor3& A, const ToleranceProfile& tp = {}) {
  LmdResult res;
  const int n = A.dim();
  const double scale = std::max(A.normSq(), 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const PairStats st = pair_stats(A, i, j);
      if (std::abs(st.d) > tp.rel_tol * scale || st.omega < -tp.rel_tol * scale) {
        res.certificate = LmdCertificate::DefiniteNo;
        res.first_order_witness = {i, j};
        SkewMatrix w(n);
        w.at(i, j) = 1.0;
        res.witness = w;
        return res;
      }
    }
  const HessianForm form = hessian_form_at_identity(A);
  res.eig_min = form.eig_min;
  res.eig_max = form.eig_max;
  res.eig_tol = tp.eig_tol_factor * form.H.norm();
  if (form.eig_max < -res.eig_tol) {
    res.certificate = LmdCertificate::DefiniteYes;
  } else if (form.eig_max > res.eig_tol) {
    res.certificate = LmdCertificate::DefiniteNo;
    SkewMatrix w(n);
    for (int p = 0; p < w.coordCount(); ++p) w.coord(p) = form.eig_max_vector(p);
    res.witness = w;
  } else {
    res.certificate = LmdCertificate::Inconclusive;
  }
  return res;
}

struct ZEigenbasisResult {
  bool ok = false;
  double max_cross = 0.0;       // max |A . u_i . u_i . u_j|, i != j
  std::vector<double> lambdas;  // A . u_i . u_i . u_i on success
};

/// Checks that the columns of U are an orthonormal set of Z-eigenvectors.
inline ZEigenbasisResult verify_z_eigenbasis(const SymTensor3& A, const OrthoMatrix& U,
                                             double tol) {
  const int n = A.dim();
  if (U.dim() != n) throw std::invalid_argument("verify_z_eigenbasis: dimension mismatch");
  ZEigenbasisResult res;
  const SymTensor3 W = contract_all(A, U.m());
  // W_iij = A . u_i . u_i . u_j, so the cross contractions are the pattern
  // entries of the rotated tensor.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      res.max_cross = std::max(res.max_cross, std::abs(W(i, i, j)));
    }
  res.ok = res.max_cross <= tol * std::max(A.norm(), 1e-300);
  if (res.ok)
    for (int i = 0; i < n; ++i) res.lambdas.push_back(W(i, i, i));
  return res;
}

/// On top of the Z-eigenbasis check: the rotated tensor must have no entries
/// with three distinct indices, which certifies odeco with basis U.
inline bool verify_odeco_given_basis(const SymTensor3& A, const OrthoMatrix& U, double tol) {
  if (!verify_z_eigenbasis(A, U, tol).ok) return false;
  const SymTensor3 W = contract_all(A, U.m());
  const double scale = std::max(A.norm(), 1e-300);
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j)
      for (int k = j + 1; k < A.dim(); ++k)
        if (std::abs(W(i, j, k)) > tol * scale) return false;
  return true;
}

struct ClassReport {
  bool pd = false;
  SdVerdict sd;
  JdEvidence jd;
  LmdResult lmd;
  std::vector<StationaryRatio> ratios;
  ToleranceProfile tolerances;
  bool lattice_consistent = true;
  std::string inconsistency;
};

/// Runs all tests and enforces the class-lattice implications
/// jd => sd, pd => sd, DefiniteYes => jd.
inline ClassReport class_report(const SymTensor3& A, const ToleranceProfile& tp = {}) {
  ClassReport rep;
  rep.tolerances = tp;
  rep.pd = is_pseudo_diagonal(A, tp.rel_tol);
  rep.sd = is_stationary_diagonal(A, tp.rel_tol);
  rep.jd = is_jacobi_diagonal(A, tp.rel_tol);
  rep.lmd = lmd_certificate(A, tp);
  if (rep.sd.sd) rep.ratios = stationary_ratios(A, tp);
  if (rep.jd.jd && !rep.sd.sd) {
    rep.lattice_consistent = false;
    rep.inconsistency = "jd without sd";
  }
  if (rep.pd && !rep.sd.sd) {
    rep.lattice_consistent = false;
    rep.inconsistency = "pd without sd";
  }
  if (rep.lmd.certificate == LmdCertificate::DefiniteYes && !rep.jd.jd) {
    rep.lattice_consistent = false;
    rep.inconsistency = "lmd certificate without jd";
  }
  return rep;
}

}  // namespace symdiag
