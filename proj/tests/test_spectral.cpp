#include <gtest/gtest.h>

#include <cmath>

#include "hosd/hosd.hpp"
#include "oracles.hpp"

namespace hosd {
namespace {

TEST(Svd, DiagonalAndZero) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 2.0;
  const auto f = svd(d);
  EXPECT_NEAR(f.s[0], 3.0, 1e-15);
  EXPECT_NEAR(f.s[1], 2.0, 1e-15);

  const auto z = svd(Matrix::Zero(2, 2));
  EXPECT_EQ(z.s, (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW(svd(Matrix(0, 3)), Error);
}

TEST(Svd, FactorizationInvariants) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GaussianStream rng(seed, 3);
    const auto rows = static_cast<Eigen::Index>(1 + seed % 6);
    const auto cols = static_cast<Eigen::Index>(1 + (seed / 3) % 5);
    const Matrix a = rng.gaussian_matrix(rows, cols);
    const auto f = svd(a);
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.s.data(), static_cast<Eigen::Index>(f.s.size()));
    const Matrix rebuilt = f.u * s.cast<Complex>().asDiagonal() * f.vh;
    EXPECT_LE((a - rebuilt).norm(), 1e-10 * std::max(1.0, f.s[0]));
    for (std::size_t i = 0; i + 1 < f.s.size(); ++i) EXPECT_GE(f.s[i], f.s[i + 1]);
    for (double x : f.s) EXPECT_GE(x, 0.0);
    const auto k = static_cast<Eigen::Index>(f.s.size());
    EXPECT_LE((f.u.adjoint() * f.u - Matrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((f.vh * f.vh.adjoint() - Matrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Svd, SquaresMatchJacobiEigenvalues) {
  GaussianStream rng(42, 1);
  const Matrix a = rng.gaussian_matrix(4, 3);
  oracle::Dense dense{4, 3, {}};
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) dense.v.push_back(a(i, j));
  const auto ev = oracle::hermitian_eigenvalues(oracle::gram_left(dense));
  const auto f = svd(a);
  ASSERT_EQ(ev.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(f.s[i] * f.s[i], ev[i], 1e-9 * ev[0]);
  EXPECT_NEAR(ev[3], 0.0, 1e-12);
}

TEST(NumericalRank, ThresholdSemantics) {
  Tolerances tol;
  const std::vector<double> tiny{1.0, 1e-15};
  EXPECT_EQ(numerical_rank(tiny, tol), 1u);
  const std::vector<double> zero{0.0};
  EXPECT_EQ(numerical_rank(zero, tol), 0u);
  const std::vector<double> s{1.0, 0.5, 1e-7};
  tol.rank_rel = 1e-8;
  EXPECT_EQ(numerical_rank(s, tol), 3u);
  tol.rank_rel = 1e-6;
  EXPECT_EQ(numerical_rank(s, tol), 2u);
}

TEST(NumericalRank, MonotoneInThreshold) {
  GaussianStream rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(6);
    for (auto& x : s) x = std::pow(10.0, -12.0 * rng.uniform());
    std::sort(s.rbegin(), s.rend());
    std::size_t last = s.size() + 1;
    for (double rel = 1e-14; rel < 1.0; rel *= 10.0) {
      Tolerances tol;
      tol.rank_rel = rel;
      const std::size_t r = numerical_rank(s, tol);
      EXPECT_LE(r, last);
      last = r;
    }
  }
}

TEST(IsUnitary, Cases) {
  Tolerances tol;
  EXPECT_TRUE(is_unitary(Matrix::Identity(3, 3), tol));
  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = 2.0;
  EXPECT_FALSE(is_unitary(d, tol));
  for (std::size_t n = 1; n <= 16; ++n) EXPECT_TRUE(is_unitary(random_unitary(n, n), tol));
  try {
    is_unitary(Matrix::Zero(2, 3), tol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSquare);
  }
}

TEST(ClusterSpectrum, Examples) {
  Tolerances tol;
  using Blocks = std::vector<std::vector<std::size_t>>;
  const std::vector<double> distinct{0.9, 0.1};
  EXPECT_EQ(cluster_spectrum(distinct, tol), (Blocks{{0}, {1}}));
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<double> ghz{s, s};
  EXPECT_EQ(cluster_spectrum(ghz, tol), (Blocks{{0, 1}}));
  const std::vector<double> near{0.6, 0.6 * (1 - 1e-9), 0.3};
  EXPECT_EQ(cluster_spectrum(near, tol), (Blocks{{0, 1}, {2}}));
  EXPECT_TRUE(cluster_spectrum(std::vector<double>{}, tol).empty());
}

TEST(ClusterSpectrum, PartitionProperty) {
  GaussianStream rng(17);
  Tolerances tol;
  tol.cluster_rel = 0.05;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(1 + trial % 9);
    for (auto& x : a) x = rng.uniform();
    std::sort(a.rbegin(), a.rend());
    const auto blocks = cluster_spectrum(a, tol);
    std::size_t next = 0;
    for (const auto& b : blocks) {
      ASSERT_FALSE(b.empty());
      for (std::size_t i : b) EXPECT_EQ(i, next++);
    }
    EXPECT_EQ(next, a.size());
  }
}

TEST(Tolerances, Validation) {
  Tolerances tol;
  EXPECT_NO_THROW(tol.validate());
  tol.max_retries = 0;
  EXPECT_THROW(tol.validate(), Error);
  tol = {};
  tol.ortho_abs = -1;
  EXPECT_THROW(tol.validate(), Error);
}

}  // namespace
}  // namespace hosd
