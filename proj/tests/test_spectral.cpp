#include "eplab/spectral.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace eplab;
using namespace eplab::spectral;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int n, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

Matrix random_symmetric(std::mt19937_64& rng, int n, double scale) {
  const Matrix m = random_matrix(rng, n, scale);
  return 0.5 * (m + m.transpose());
}

Matrix random_skew(std::mt19937_64& rng, int n, double scale) {
  const Matrix m = random_matrix(rng, n, scale);
  return 0.5 * (m - m.transpose());
}

TEST(Decompose, SymmetricInputHasNoVorticity) {
  Matrix m(3, 3);
  m << 1, 2, 3, 2, 5, -1, 3, -1, 0;
  const auto dec = decompose(m);
  EXPECT_EQ(dec.skew.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(dec.vorticity.size(), 3);
  EXPECT_EQ(dec.vorticity.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(dec.divergence, 6.0);
}

TEST(Decompose, PureRotation) {
  Matrix m(2, 2);
  m << 0, -1, 1, 0;
  const auto dec = decompose(m);
  EXPECT_EQ(dec.sym.cwiseAbs().maxCoeff(), 0.0);
  ASSERT_EQ(dec.vorticity.size(), 1);
  EXPECT_DOUBLE_EQ(dec.vorticity.norm(), 2.0);
  EXPECT_DOUBLE_EQ((dec.skew * dec.skew).trace(), -2.0);
}

TEST(Decompose, VorticitySignConvention) {
  // M(i, j) = du_j/dx_i: in 2D omega = du_2/dx_1 - du_1/dx_2 = M(0,1) - M(1,0).
  Matrix m(2, 2);
  m << 0.3, 4.0, 1.5, -0.2;
  EXPECT_DOUBLE_EQ(decompose(m).vorticity[0], 4.0 - 1.5);
  Matrix m3 = Matrix::Zero(3, 3);
  m3(1, 2) = 1.0;  // pair (1,2) is the third entry in row-major order
  const Vector w = decompose(m3).vorticity;
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_EQ(w[2], 1.0);
}

TEST(Decompose, Reassembly) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    const Matrix m = random_matrix(rng, n);
    const auto dec = decompose(m);
    EXPECT_LE((dec.sym + dec.skew - m).cwiseAbs().maxCoeff(), 1e-15 * 10.0 * 2);
    EXPECT_EQ((dec.sym - dec.sym.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((dec.skew + dec.skew.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_NEAR(dec.vorticity.squaredNorm(), -2.0 * (dec.skew * dec.skew).trace(), 1e-10);
    EXPECT_EQ(unpack_vorticity(dec.vorticity, n), dec.skew);
  }
}

TEST(Decompose, RejectsNonSquare) {
  EXPECT_THROW((void)decompose(Matrix::Zero(2, 3)), DomainError);
  EXPECT_THROW((void)trace_identities(Matrix::Zero(3, 2)), DomainError);
  EXPECT_THROW((void)trace_identities(Matrix::Zero(17, 17)), DomainError);
}

TEST(TraceIdentities, PureRotation) {
  Matrix m(2, 2);
  m << 0, -1, 1, 0;
  const auto r = trace_identities(m);
  EXPECT_DOUBLE_EQ(r.sum_lambda_m_sq, -2.0);
  EXPECT_DOUBLE_EQ(r.sum_lambda_s_sq, 0.0);
  EXPECT_DOUBLE_EQ(r.vorticity_sq, 4.0);
  EXPECT_EQ(r.residual_sum2, 0.0);
}

TEST(TraceIdentities, Diagonal) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -4.0;
  const auto r = trace_identities(m);
  EXPECT_DOUBLE_EQ(r.sum_lambda_s_sq, 1.5 * 1.5 + 16.0);
  EXPECT_EQ(r.vorticity_sq, 0.0);
  EXPECT_DOUBLE_EQ(r.divergence, -2.5);
}

TEST(TraceIdentities, AgreeWithEigenvalueOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const Matrix m = random_matrix(rng, n);
    const auto r = trace_identities(m);
    const auto em = oracle::eigen_sums_general(m);
    const auto es = oracle::eigen_sums_symmetric(decompose(m).sym);
    EXPECT_LE(std::abs(em.sum - es.sum), 1e-10);
    EXPECT_LE(std::abs(es.sum - r.divergence), 1e-10);
    EXPECT_LE(std::abs(em.sum_sq - (es.sum_sq - 0.5 * r.vorticity_sq)), 1e-10);
    EXPECT_LE(std::abs(em.sum_sq - r.sum_lambda_m_sq), 1e-10);
    EXPECT_LE(std::abs(es.sum_sq - r.sum_lambda_s_sq), 1e-10);
    EXPECT_LE(r.residual_sum1, 1e-10);
    EXPECT_LE(r.residual_sum2, 1e-10);
  }
}

TEST(CauchySchwarzGap, Examples) {
  for (int n = 1; n <= 5; ++n) {
    const auto dec = decompose(Matrix::Identity(n, n));
    EXPECT_NEAR(cauchy_schwarz_gap(dec), 0.0, 1e-15);
  }
  Matrix one(1, 1);
  one << -3.7;
  EXPECT_EQ(cauchy_schwarz_gap(decompose(one)), 0.0);
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1;
  s(1, 1) = -1;
  EXPECT_DOUBLE_EQ(cauchy_schwarz_gap(decompose(s)), 2.0);
}

TEST(CauchySchwarzGap, NonnegativeOnRandomMatrices) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 6;
    EXPECT_GE(cauchy_schwarz_gap(decompose(random_matrix(rng, n))), -1e-12);
  }
}

TEST(EvolveSkew, ZeroStaysZero) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<double> times;
    std::vector<Matrix> samples;
    for (int k = 0; k <= 20; ++k) {
      times.push_back(0.1 * k);
      samples.push_back(random_symmetric(rng, n, 3.0));
    }
    const Matrix a = evolve_skew(Matrix::Zero(n, n), SymmetricPath(times, samples), 2.0);
    EXPECT_EQ(a.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(EvolveSkew, ZeroStrainIsIdentityMap) {
  std::mt19937_64 rng(10);
  const Matrix a0 = random_skew(rng, 3, 2.0);
  const Matrix a = evolve_skew(a0, SymmetricPath::constant(Matrix::Zero(3, 3)), 5.0);
  EXPECT_LE((a - a0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EvolveSkew, IsotropicStrainDecaysExponentially) {
  std::mt19937_64 rng(12);
  for (double s : {-0.7, 0.3, 1.1}) {
    const Matrix a0 = random_skew(rng, 4, 1.0);
    const double t = 1.5;
    const Matrix a = evolve_skew(a0, SymmetricPath::constant(s * Matrix::Identity(4, 4)), t);
    EXPECT_LE((a - std::exp(-2 * s * t) * a0).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(EvolveSkew, SkewAtEveryAcceptedStep) {
  std::mt19937_64 rng(13);
  const Matrix a0 = random_skew(rng, 3, 1.0);
  std::vector<double> times{0.0, 0.5, 1.0};
  std::vector<Matrix> samples{random_symmetric(rng, 3, 1.0), random_symmetric(rng, 3, 1.0),
                              random_symmetric(rng, 3, 1.0)};
  int steps = 0;
  (void)evolve_skew(a0, SymmetricPath(times, samples), 1.0, {}, [&](double, const Matrix& a) {
    ++steps;
    EXPECT_LE((a + a.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  });
  EXPECT_GT(steps, 0);
}

TEST(EvolveSkew, ShapeErrors) {
  EXPECT_THROW((void)evolve_skew(Matrix::Zero(2, 2), SymmetricPath::constant(Matrix::Zero(3, 3)), 1.0), DomainError);
  Matrix not_skew = Matrix::Identity(2, 2);
  EXPECT_THROW((void)evolve_skew(not_skew, SymmetricPath::constant(Matrix::Zero(2, 2)), 1.0), DomainError);
  EXPECT_THROW(SymmetricPath({0.0, 0.0}, {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), DomainError);
}

}  // namespace
