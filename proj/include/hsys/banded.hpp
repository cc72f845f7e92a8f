#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace hsys::banded {

/// Square band matrix with kd sub- and super-diagonals, both triangles
/// stored. Symmetric assembly writes each entry to (i, j) and (j, i) from
/// the same value, so symmetry is exact rather than enforced afterwards.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t kd);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return kd_; }

  double operator()(std::size_t i, std::size_t j) const;
  /// Adds v at (i, j) and, when i != j, at (j, i).
  void add_symmetric(std::size_t i, std::size_t j, double v);

  bool is_symmetric() const;
  Eigen::MatrixXd to_dense() const;
  void multiply(const double* x, double* y) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const { return (kd_ + i - j) + j * (2 * kd_ + 1); }

  std::size_t n_ = 0;
  std::size_t kd_ = 0;
  std::vector<double> ab_;
};

struct EigenPairs {
  std::vector<double> values;      ///< ascending
  std::vector<Eigen::VectorXd> vectors;  ///< Euclidean-orthonormal
};

/// Eigenpairs of the symmetric band matrix C with eigenvalue in (lo, hi].
/// Eigenvalues by tridiagonal reduction and bisection, eigenvectors by
/// inverse iteration on the band LU of C - mu I with reorthogonalization.
/// Throws NumericalError when an eigenvector does not converge.
EigenPairs symmetric_band_eigen(const BandMatrix& C, double lo, double hi);

}  // namespace hsys::banded
