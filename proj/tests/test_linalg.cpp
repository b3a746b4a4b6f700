#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qalab/errors.hpp"
#include "qalab/linalg.hpp"

using namespace qalab;

namespace {

ComplexMatrix random_hermitian(int n, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(d(rng), d(rng));
  return 0.5 * (a + a.adjoint());
}

ComplexVector random_state(int n, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(d(rng), d(rng));
  return v / v.norm();
}

// Largest |eigenvalue| by power iteration on H^2, independent of the eigensolver.
double power_norm(const ComplexMatrix& h) {
  const ComplexMatrix h2 = h * h;
  ComplexVector v = ComplexVector::Ones(h.rows());
  for (int i = 0; i < h.rows(); ++i) v(i) += Complex(0.1 * i, 0.03 * i * i);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    ComplexVector w = h2 * v;
    const double next = w.norm() / v.norm();
    v = w / w.norm();
    if (std::abs(next - lambda) < 1e-15 * next) break;
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST(HermitianOperator, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, 1.0;
  EXPECT_THROW(HermitianOperator{m}, ContractError);
  ComplexMatrix rect(2, 3);
  rect.setZero();
  EXPECT_THROW(HermitianOperator{rect}, ContractError);
}

TEST(HermitianOperator, AcceptsRoundoffAndSymmetrizes) {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(2.0, 1.0), Complex(2.0, -1.0 + 1e-14), 3.0;
  const HermitianOperator h(m);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_FALSE(h.is_real());
  EXPECT_TRUE(HermitianOperator::identity(3).is_real());
}

TEST(Eigendecompose, SpinOneSxKnownSpectrum) {
  // -2 Sx for spin 1: characteristic polynomial -l^3 + 4 l -> roots -2, 0, 2.
  RealMatrix m = RealMatrix::Zero(3, 3);
  const double c = std::sqrt(2.0) / 2.0;
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = -2.0 * c;
  const auto spec = eigendecompose(HermitianOperator(m));
  ASSERT_EQ(spec.eigenvalues.size(), 3u);
  EXPECT_NEAR(spec.eigenvalues[0], -2.0, 1e-14);
  EXPECT_NEAR(spec.eigenvalues[1], 0.0, 1e-14);
  EXPECT_NEAR(spec.eigenvalues[2], 2.0, 1e-14);
}

TEST(Eigendecompose, RandomHermitianProperties) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 9;
    const HermitianOperator h(random_hermitian(n, rng));
    const auto spec = eigendecompose(h);
    const ComplexMatrix& v = spec.eigenvectors;
    EXPECT_LT((v.adjoint() * v - ComplexMatrix::Identity(n, n)).norm(), 1e-12);
    for (int i = 0; i + 1 < n; ++i) EXPECT_LE(spec.eigenvalues[i], spec.eigenvalues[i + 1]);
    const ComplexMatrix rebuilt = spec.assemble(spec.eigenvalues).matrix();
    EXPECT_LT((rebuilt - h.matrix()).norm(), 1e-11 * (1.0 + h.matrix().norm()));
    double trace = 0.0;
    for (double e : spec.eigenvalues) trace += e;
    EXPECT_NEAR(trace, h.matrix().trace().real(), 1e-11);
    for (int i = 0; i < n; ++i) {
      const ComplexVector col = spec.vector(i);
      EXPECT_LT((fix_phase(col) - col).norm(), 1e-15);
    }
  }
}

TEST(Eigendecompose, DeterministicAcrossCalls) {
  std::mt19937 rng(11);
  const HermitianOperator h(random_hermitian(6, rng));
  const auto a = eigendecompose(h);
  const auto b = eigendecompose(h);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ((a.eigenvectors - b.eigenvectors).norm(), 0.0);
}

TEST(Eigendecompose, DegenerateSpectrumGivesOrthonormalBasis) {
  const auto spec = eigendecompose(HermitianOperator::diagonal({1.0, 1.0, 0.0}));
  EXPECT_DOUBLE_EQ(spec.eigenvalues[0], 0.0);
  EXPECT_DOUBLE_EQ(spec.eigenvalues[1], 1.0);
  EXPECT_DOUBLE_EQ(spec.eigenvalues[2], 1.0);
  EXPECT_LT((spec.eigenvectors.adjoint() * spec.eigenvectors - ComplexMatrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(OperatorNorm, MatchesPowerIteration) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_hermitian(5, rng);
    EXPECT_NEAR(operator_norm(HermitianOperator(m)), power_norm(m), 1e-9);
  }
}

TEST(OperatorNorm, TriangleInequality) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const HermitianOperator a(random_hermitian(4, rng));
    const HermitianOperator b(random_hermitian(4, rng));
    EXPECT_LE(operator_norm(a + b), operator_norm(a) + operator_norm(b) + 1e-12);
    EXPECT_NEAR(operator_norm(-2.5 * a), 2.5 * operator_norm(a), 1e-12);
  }
}

TEST(Moments, EigenstateHasZeroSpread) {
  std::mt19937 rng(13);
  const HermitianOperator h(random_hermitian(5, rng));
  const auto spec = eigendecompose(h);
  for (int i = 0; i < 5; ++i) {
    const auto m = expectation_and_std(h, spec.vector(i));
    EXPECT_NEAR(m.mean, spec.eigenvalues[i], 1e-12);
    EXPECT_NEAR(m.std, 0.0, 1e-6);
  }
}

TEST(Moments, MatchesDirectFormula) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_hermitian(4, rng);
    const ComplexVector psi = random_state(4, rng);
    const double mean = psi.dot(m * psi).real();
    const double second = psi.dot(m * m * psi).real();
    const auto got = expectation_and_std(HermitianOperator(m), psi);
    EXPECT_NEAR(got.mean, mean, 1e-12);
    EXPECT_NEAR(got.std, std::sqrt(std::max(0.0, second - mean * mean)), 1e-10);
    EXPECT_GE(got.std, 0.0);
  }
}

TEST(Moments, RequiresNormalizedState) {
  const auto h = HermitianOperator::identity(2);
  ComplexVector psi(2);
  psi << 1.0, 1.0;
  EXPECT_THROW(expectation_and_std(h, psi), ContractError);
  EXPECT_NO_THROW(moments_unchecked(h, psi));
}

TEST(FixPhase, IdempotentAndPhaseInvariant) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexVector v = random_state(5, rng);
    const ComplexVector a = fix_phase(v);
    const ComplexVector b = fix_phase(std::polar(1.0, 0.37 * trial) * v);
    EXPECT_LT((a - b).norm(), 1e-14);
    EXPECT_LT((fix_phase(a) - a).norm(), 1e-15);
    const auto k = leading_index(a);
    EXPECT_EQ(a(k).imag(), 0.0);
    EXPECT_GE(a(k).real(), 0.0);
  }
  EXPECT_THROW(fix_phase(ComplexVector::Zero(3)), ContractError);
}

TEST(FixPhase, TiesResolveToLowestIndex) {
  ComplexVector v(2);
  v << Complex(0.0, -1.0), Complex(1.0, 0.0);
  const ComplexVector f = fix_phase(v / std::sqrt(2.0));
  EXPECT_NEAR(f(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(f(0).imag(), 0.0);
}
