#pragma once

// Dense third order tensors over the reals: a packed symmetric storage class
// (one value per unordered index triple) and a general cubic array used for
// three-factor contractions.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace symdiag {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

inline std::size_t tri(std::size_t m) { return m * (m + 1) / 2; }
inline std::size_t tet(std::size_t m) { return m * (m + 1) * (m + 2) / 6; }

}  // namespace detail

/// General (not necessarily symmetric) n x n x n tensor.
class Tensor3 {
 public:
  explicit Tensor3(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n, 0.0) {
    if (n < 1) throw std::invalid_argument("Tensor3: dimension must be positive");
  }

  int dim() const { return n_; }

  double operator()(int i, int j, int k) const { return v_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return v_[index(i, j, k)]; }

  double normSq() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return s;
  }

  double diagNormSq() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, i, i) * (*this)(i, i, i);
    return s;
  }

  // T <- T contracted on `mode` with M, summing the second index of M:
  // mode 0 gives  result_{ijk} = sum_l T_{ljk} M_{il}.
  Tensor3 contractMode(int mode, const Matrix& M) const {
    if (M.rows() != n_ || M.cols() != n_)
      throw std::invalid_argument("contractMode: dimension mismatch");
    Tensor3 out(n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c) {
          const int m = mode == 0 ? a : (mode == 1 ? b : c);
          double s = 0.0;
          for (int l = 0; l < n_; ++l)
            s += (*this)(mode == 0 ? l : a, mode == 1 ? l : b, mode == 2 ? l : c) * M(l, m);
          out(a, b, c) = s;
        }
    return out;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  int n_;
  std::vector<double> v_;
};

/// Symmetric n x n x n tensor, stored once per unordered triple i <= j <= k.
/// Indices are 0-based in code (1-based in the file formats).
class SymTensor3 {
 public:
  explicit SymTensor3(int n) : n_(n), v_(detail::tet(static_cast<std::size_t>(n)), 0.0) {
    if (n < 1) throw std::invalid_argument("SymTensor3: dimension must be positive");
  }

  int dim() const { return n_; }
  std::size_t packedSize() const { return v_.size(); }

  double operator()(int i, int j, int k) const { return v_[index(i, j, k)]; }

  void set(int i, int j, int k, double value) { v_[index(i, j, k)] = value; }
  void add(int i, int j, int k, double value) { v_[index(i, j, k)] += value; }

  /// Multiplicity of the unordered triple {i,j,k} in the full index set.
  static int multiplicity(int i, int j, int k) {
    if (i == j && j == k) return 1;
    if (i == j || j == k || i == k) return 3;
    return 6;
  }

  /// Frobenius norm squared over the full (unfolded) index set.
  double normSq() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        for (int k = j; k < n_; ++k) {
          const double x = (*this)(i, j, k);
          s += multiplicity(i, j, k) * x * x;
        }
    return s;
  }

  double norm() const { return std::sqrt(normSq()); }

  double diagNormSq() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, i, i) * (*this)(i, i, i);
    return s;
  }

  bool isDiagonal(double tol) const {
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        for (int k = j; k < n_; ++k)
          if (!(i == j && j == k) && std::abs((*this)(i, j, k)) > tol) return false;
    return true;
  }

  Tensor3 dense() const {
    Tensor3 t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) t(i, j, k) = (*this)(i, j, k);
    return t;
  }

  /// Reads the sorted entry of a dense tensor assumed symmetric up to rounding.
  static SymTensor3 fromDense(const Tensor3& t) {
    SymTensor3 a(t.dim());
    for (int i = 0; i < a.n_; ++i)
      for (int j = i; j < a.n_; ++j)
        for (int k = j; k < a.n_; ++k) a.set(i, j, k, t(i, j, k));
    return a;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_)
      throw std::out_of_range("SymTensor3: index out of range");
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    const std::size_t n = static_cast<std::size_t>(n_);
    const std::size_t off1 = detail::tet(n) - detail::tet(n - i);
    const std::size_t m = n - i;
    const std::size_t jp = j - i, kp = k - i;
    const std::size_t off2 = detail::tri(m) - detail::tri(m - jp);
    return off1 + off2 + (kp - jp);
  }

  int n_;
  std::vector<double> v_;
};

/// W = A contracted with Q^T on all three modes; W_{ijk} = sum A_{pqr} Q_{pi} Q_{qj} Q_{rk}.
/// Computed mode by mode in O(n^4).
inline SymTensor3 contract_all(const SymTensor3& A, const Matrix& Q) {
  if (Q.rows() != A.dim() || Q.cols() != A.dim())
    throw std::invalid_argument("contract_all: dimension mismatch");
  Tensor3 t = A.dense();
  for (int mode = 0; mode < 3; ++mode) t = t.contractMode(mode, Q);
  return SymTensor3::fromDense(t);
}

/// General three-factor contraction A x1 P^T x2 Q^T x3 R^T.
inline Tensor3 contract_modes(const SymTensor3& A, const Matrix& P, const Matrix& Q,
                              const Matrix& R) {
  const int n = A.dim();
  if (P.rows() != n || P.cols() != n || Q.rows() != n || Q.cols() != n || R.rows() != n ||
      R.cols() != n)
    throw std::invalid_argument("contract_modes: dimension mismatch");
  Tensor3 t = A.dense();
  t = t.contractMode(0, P);
  t = t.contractMode(1, Q);
  t = t.contractMode(2, R);
  return t;
}

/// Principal subtensor on a strictly increasing index set (0-based).
inline SymTensor3 subtensor(const SymTensor3& A, const std::vector<int>& indices) {
  const int m = static_cast<int>(indices.size());
  if (m < 2) throw std::invalid_argument("subtensor: need at least two indices");
  for (int t = 0; t < m; ++t) {
    if (indices[t] < 0 || indices[t] >= A.dim())
      throw std::invalid_argument("subtensor: index out of range");
    if (t > 0 && indices[t] <= indices[t - 1])
      throw std::invalid_argument("subtensor: indices must be strictly increasing");
  }
  SymTensor3 s(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k) s.set(i, j, k, A(indices[i], indices[j], indices[k]));
  return s;
}

/// Mode-1 unfolding, n x n^2, column index j*n + k.
inline Matrix unfold_mode1(const SymTensor3& A) {
  const int n = A.dim();
  Matrix M(n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) M(i, j * n + k) = A(i, j, k);
  return M;
}

/// Numerical rank of the mode-1 unfolding with threshold rank_tol * sigma_max.
inline int unfold_mode1_rank(const SymTensor3& A, double rank_tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(unfold_mode1(A));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++r;
  return r;
}

}  // namespace symdiag
