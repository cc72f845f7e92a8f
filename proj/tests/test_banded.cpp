#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "gen.hpp"
#include "hsys/banded.hpp"

using namespace hsys;
using namespace hsys::banded;

namespace {

BandMatrix random_band(std::size_t n, std::size_t kd, testing::Gen& gen) {
  BandMatrix A(n, kd);
  for (std::size_t j = 0; j < n; ++j) {
    A.add_symmetric(j, j, gen.uniform(-5, 5));
    for (std::size_t i = j + 1; i <= std::min(n - 1, j + kd); ++i) A.add_symmetric(i, j, gen.uniform(-1, 1));
  }
  return A;
}

}  // namespace

TEST_CASE("band storage is symmetric and multiplies like the dense matrix") {
  testing::Gen gen(77);
  const BandMatrix A = random_band(40, 3, gen);
  CHECK(A.is_symmetric());
  const Eigen::MatrixXd D = A.to_dense();
  CHECK((D - D.transpose()).norm() == 0.0);
  CHECK(A(0, 10) == 0.0);
  Eigen::VectorXd x = Eigen::VectorXd::Map(gen.vector(40, -1, 1).data(), 40);
  Eigen::VectorXd y(40);
  A.multiply(x.data(), y.data());
  CHECK((y - D * x).norm() < 1e-13);
}

TEST_CASE("band eigensolver agrees with a dense solver") {
  testing::Gen gen(5150);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = static_cast<std::size_t>(gen.integer(20, 120));
    const auto kd = static_cast<std::size_t>(gen.integer(1, 4));
    const BandMatrix A = random_band(n, kd, gen);
    const Eigen::MatrixXd D = A.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
    const double lo = gen.uniform(-4, 0);
    const double hi = lo + gen.uniform(1, 4);
    const EigenPairs ep = symmetric_band_eigen(A, lo, hi);
    std::vector<double> expect;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()[i] > lo && es.eigenvalues()[i] <= hi) expect.push_back(es.eigenvalues()[i]);
    }
    REQUIRE(ep.values.size() == expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k) {
      CHECK(ep.values[k] == doctest::Approx(expect[k]).epsilon(1e-12).scale(1.0));
      const Eigen::VectorXd& v = ep.vectors[k];
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
      CHECK((D * v - ep.values[k] * v).norm() < 1e-10);
      for (std::size_t l = 0; l < k; ++l) CHECK(std::abs(v.dot(ep.vectors[l])) < 1e-10);
    }
  }
}

TEST_CASE("degenerate eigenvalues get orthogonal vectors") {
  // Two decoupled identical blocks.
  BandMatrix A(20, 1);
  for (std::size_t i = 0; i < 20; ++i) A.add_symmetric(i, i, 2.0);
  for (std::size_t i = 0; i + 1 < 20; ++i) {
    if (i != 9) A.add_symmetric(i + 1, i, -1.0);
  }
  const EigenPairs ep = symmetric_band_eigen(A, -1.0, 5.0);
  REQUIRE(ep.values.size() == 20);
  for (std::size_t k = 0; k < 20; k += 2) CHECK(ep.values[k] == doctest::Approx(ep.values[k + 1]).epsilon(1e-12));
  for (std::size_t k = 0; k < 20; ++k) {
    for (std::size_t l = 0; l < k; ++l) CHECK(std::abs(ep.vectors[k].dot(ep.vectors[l])) < 1e-10);
  }
}

TEST_CASE("empty interval") {
  testing::Gen gen(1);
  const BandMatrix A = random_band(30, 2, gen);
  CHECK(symmetric_band_eigen(A, 100.0, 200.0).values.empty());
}
