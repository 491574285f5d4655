#pragma once

// Certified orthogonal matrices, skew-symmetric tangent parameterization and
// a deterministic random number layer (Box-Muller over a 64-bit generator, so
// streams are reproducible across standard library implementations).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "symdiag/tensor.hpp"

namespace symdiag {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// n x n matrix with certified orthonormal columns.
class OrthoMatrix {
 public:
  static constexpr double kDefaultTol = 1e-12;

  explicit OrthoMatrix(Matrix m, double ortho_tol = kDefaultTol, bool require_special = false)
      : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw std::invalid_argument("OrthoMatrix: must be square");
    double drift = orthoDrift(m_);
    if (drift > ortho_tol) {
      if (drift > 1e-8) throw std::invalid_argument("OrthoMatrix: input is not orthogonal");
      // Mild drift: project back with a QR factorization keeping column signs.
      Eigen::HouseholderQR<Matrix> qr(m_);
      Matrix q = qr.householderQ();
      Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int i = 0; i < m_.cols(); ++i)
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
      m_ = q;
      drift = orthoDrift(m_);
      if (drift > ortho_tol)
        throw std::invalid_argument("OrthoMatrix: re-orthonormalization failed");
    }
    det_sign_ = m_.determinant() > 0.0 ? 1 : -1;
    if (require_special && det_sign_ != 1)
      throw std::invalid_argument("OrthoMatrix: determinant -1, expected SO(n)");
  }

  static double orthoDrift(const Matrix& m) {
    const Matrix e = m.transpose() * m - Matrix::Identity(m.cols(), m.cols());
    return e.cwiseAbs().maxCoeff();
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  int detSign() const { return det_sign_; }
  const Matrix& m() const { return m_; }

 private:
  Matrix m_;
  int det_sign_;
};

/// Skew matrix given by its strictly-upper triangle, pair order
/// (0,1),(0,2),...,(0,n-1),(1,2),... matching the cyclic Jacobi rule.
class SkewMatrix {
 public:
  explicit SkewMatrix(int n) : n_(n), upper_(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0) {
    if (n < 1) throw std::invalid_argument("SkewMatrix: dimension must be positive");
  }

  static SkewMatrix fromMatrix(const Matrix& d) {
    SkewMatrix s(static_cast<int>(d.rows()));
    for (int i = 0; i < s.n_; ++i)
      for (int j = i + 1; j < s.n_; ++j) s.upper_[pairIndex(s.n_, i, j)] = d(i, j);
    return s;
  }

  static int pairIndex(int n, int i, int j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }

  int dim() const { return n_; }
  int coordCount() const { return static_cast<int>(upper_.size()); }

  double& coord(int p) { return upper_[p]; }
  double coord(int p) const { return upper_[p]; }
  double& at(int i, int j) { return upper_[pairIndex(n_, i, j)]; }  // requires i < j

  Matrix matrix() const {
    Matrix d = Matrix::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        d(i, j) = upper_[pairIndex(n_, i, j)];
        d(j, i) = -d(i, j);
      }
    return d;
  }

  Vector coords() const {
    Vector x(coordCount());
    for (int p = 0; p < coordCount(); ++p) x(p) = upper_[p];
    return x;
  }

 private:
  int n_;
  std::vector<double> upper_;
};

/// Givens rotation matrix G(i,j,theta), i < j.
inline Matrix givens(int n, int i, int j, double theta) {
  if (i < 0 || j <= i || j >= n) throw std::invalid_argument("givens: bad pair");
  Matrix g = Matrix::Identity(n, n);
  const double c = std::cos(theta), s = std::sin(theta);
  g(i, i) = c;
  g(j, j) = c;
  g(j, i) = s;
  g(i, j) = -s;
  return g;
}

/// Haar-ish random orthogonal matrix: QR of a Gaussian matrix, sign-fixed.
inline Matrix random_orthogonal(int n, Rng& rng, bool special = true) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  if (special && q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

inline SkewMatrix random_skew(int n, Rng& rng) {
  SkewMatrix d(n);
  for (int p = 0; p < d.coordCount(); ++p) d.coord(p) = rng.normal();
  return d;
}

}  // namespace symdiag
