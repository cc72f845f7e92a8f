#include "hsys/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hsys/types.hpp"

namespace hsys::banded {

BandMatrix::BandMatrix(std::size_t n, std::size_t kd) : n_(n), kd_(kd), ab_((2 * kd + 1) * n, 0.0) {}

double BandMatrix::operator()(std::size_t i, std::size_t j) const {
  const std::size_t d = i > j ? i - j : j - i;
  if (d > kd_) return 0.0;
  return ab_[index(i, j)];
}

void BandMatrix::add_symmetric(std::size_t i, std::size_t j, double v) {
  const std::size_t d = i > j ? i - j : j - i;
  if (d > kd_ || i >= n_ || j >= n_) throw ConfigError("band entry outside the stored band");
  ab_[index(i, j)] += v;
  if (i != j) ab_[index(j, i)] += v;
}

bool BandMatrix::is_symmetric() const {
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = j + 1; i < std::min(n_, j + kd_ + 1); ++i) {
      if (ab_[index(i, j)] != ab_[index(j, i)]) return false;
    }
  }
  return true;
}

Eigen::MatrixXd BandMatrix::to_dense() const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t lo = j > kd_ ? j - kd_ : 0;
    const std::size_t hi = std::min(n_, j + kd_ + 1);
    for (std::size_t i = lo; i < hi; ++i) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ab_[index(i, j)];
  }
  return M;
}

void BandMatrix::multiply(const double* x, double* y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > kd_ ? i - kd_ : 0;
    const std::size_t hi = std::min(n_, i + kd_ + 1);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += ab_[index(i, j)] * x[j];
    y[i] = s;
  }
}

namespace {

using Eigen::VectorXd;

std::vector<double> eigenvalues_in(const BandMatrix& C, double lo, double hi) {
  const auto n = static_cast<lapack_int>(C.size());
  const auto kd = static_cast<lapack_int>(C.bandwidth());
  const lapack_int ldab = kd + 1;
  // Upper storage: AB(kd + i - j, j) = C(i, j) for j - kd <= i <= j.
  std::vector<double> ab(static_cast<std::size_t>(ldab * n), 0.0);
  for (lapack_int j = 0; j < n; ++j) {
    for (lapack_int i = std::max<lapack_int>(0, j - kd); i <= j; ++i) {
      ab[static_cast<std::size_t>(kd + i - j + j * ldab)] = C(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  std::vector<double> d(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(std::max<lapack_int>(1, n - 1)));
  double q_unused = 0.0;
  lapack_int info = LAPACKE_dsbtrd(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), ldab, d.data(), e.data(),
                                   &q_unused, 1);
  if (info != 0) throw NumericalError("band tridiagonal reduction failed, info = " + std::to_string(info));

  lapack_int found = 0;
  lapack_int nsplit = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> iblock(static_cast<std::size_t>(n));
  std::vector<lapack_int> isplit(static_cast<std::size_t>(n));
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  info = LAPACKE_dstebz('V', 'E', n, lo, hi, 0, 0, abstol, d.data(), e.data(), &found, &nsplit, w.data(),
                        iblock.data(), isplit.data());
  if (info != 0) throw NumericalError("bisection failed to converge, info = " + std::to_string(info));
  w.resize(static_cast<std::size_t>(found));
  std::sort(w.begin(), w.end());
  return w;
}

class ShiftedLu {
 public:
  ShiftedLu(const BandMatrix& C, double shift) : n_(static_cast<lapack_int>(C.size())), k_(static_cast<lapack_int>(C.bandwidth())) {
    ldab_ = 3 * k_ + 1;
    ab_.assign(static_cast<std::size_t>(ldab_ * n_), 0.0);
    ipiv_.resize(static_cast<std::size_t>(n_));
    for (lapack_int j = 0; j < n_; ++j) {
      const lapack_int lo = std::max<lapack_int>(0, j - k_);
      const lapack_int hi = std::min<lapack_int>(n_ - 1, j + k_);
      for (lapack_int i = lo; i <= hi; ++i) {
        double v = C(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (i == j) v -= shift;
        ab_[static_cast<std::size_t>(2 * k_ + i - j + j * ldab_)] = v;
      }
    }
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, k_, k_, ab_.data(), ldab_, ipiv_.data());
    if (info < 0) throw NumericalError("band LU failed, info = " + std::to_string(info));
    singular_ = info > 0;
  }
  bool singular() const { return singular_; }
  void solve(VectorXd& b) const {
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, k_, k_, 1, ab_.data(), ldab_, ipiv_.data(),
                                           b.data(), n_);
    if (info != 0) throw NumericalError("band triangular solve failed, info = " + std::to_string(info));
  }

 private:
  lapack_int n_;
  lapack_int k_;
  lapack_int ldab_;
  std::vector<double> ab_;
  std::vector<lapack_int> ipiv_;
  bool singular_ = false;
};

}  // namespace

EigenPairs symmetric_band_eigen(const BandMatrix& C, double lo, double hi) {
  if (!(hi > lo)) throw ConfigError("eigenvalue interval is empty");
  EigenPairs out;
  out.values = eigenvalues_in(C, lo, hi);
  const auto n = static_cast<Eigen::Index>(C.size());
  double cnorm = 0.0;
  for (std::size_t i = 0; i < C.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = (i > C.bandwidth() ? i - C.bandwidth() : 0); j < std::min(C.size(), i + C.bandwidth() + 1); ++j) {
      row += std::abs(C(i, j));
    }
    cnorm = std::max(cnorm, row);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double res_tol = 1e3 * eps * std::max(1.0, cnorm) * std::sqrt(static_cast<double>(n));

  std::mt19937_64 rng(20240611u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd Cy(n);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const double mu = out.values[k];
    double shift = mu + eps * std::max(1.0, std::abs(mu)) * 8.0;
    ShiftedLu lu(C, shift);
    if (lu.singular()) {
      shift = mu + 1e-10 * std::max(1.0, std::abs(mu));
      lu = ShiftedLu(C, shift);
      if (lu.singular()) throw NumericalError("inverse iteration: shifted matrix singular at index " + std::to_string(k));
    }
    VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = gauss(rng);
    y.normalize();
    bool converged = false;
    for (int it = 0; it < 8 && !converged; ++it) {
      lu.solve(y);
      // Keep the iterate orthogonal to vectors already found in this window.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : out.vectors) y -= v.dot(y) * v;
      }
      const double nrm = y.norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      y /= nrm;
      C.multiply(y.data(), Cy.data());
      const double rq = y.dot(Cy);
      converged = (Cy - rq * y).norm() <= res_tol && it >= 1;
    }
    if (!converged) {
      throw NumericalError("eigenvector did not converge at index " + std::to_string(k) + " (eigenvalue " +
                           std::to_string(mu) + ")");
    }
    out.vectors.push_back(y);
  }
  return out;
}

}  // namespace hsys::banded
