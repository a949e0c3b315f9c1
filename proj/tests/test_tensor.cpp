#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcorr/states.hpp"
#include "qcorr/tensor.hpp"

namespace qcorr {
namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return m;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return hermitian_part(g);
}

TEST(Kron, ScalarOneIsIdentityOperation) {
  Rng rng(3);
  const ComplexMatrix b = random_ginibre(3, 2, rng);
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  EXPECT_EQ(kron(one, b), b);
}

TEST(Kron, IdentitiesMultiply) {
  EXPECT_EQ(kron(identity(2), identity(2)), identity(4));
}

TEST(Kron, DiagonalHandExpansion) {
  EXPECT_EQ(kron(diag({1, 0}), diag({0.5, 0.5})), diag({0.5, 0.5, 0, 0}));
}

TEST(Kron, MixedProductAndAssociativity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const ComplexMatrix a = random_ginibre(2, 3, rng), b = random_ginibre(3, 2, rng);
    const ComplexMatrix c = random_ginibre(3, 2, rng), d = random_ginibre(2, 2, rng);
    EXPECT_LE((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm(), 1e-12);
    const ComplexMatrix e = random_ginibre(2, 2, rng);
    const ComplexMatrix lhs = kron(kron(a, b), e), rhs = kron(a, kron(b, e));
    EXPECT_LE((lhs - rhs).norm(), 1e-14 * std::max(1.0, lhs.norm()));
  }
}

TEST(DensityMatrix, RejectsInvariantViolations) {
  EXPECT_THROW(DensityMatrix({2}, diag({0.5, 0.4})), PreconditionError);   // trace
  EXPECT_THROW(DensityMatrix({2}, diag({1.5, -0.5})), PreconditionError);  // not PSD
  ComplexMatrix nh = diag({0.5, 0.5});
  nh(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix({2}, nh), PreconditionError);                 // not Hermitian
  EXPECT_THROW(DensityMatrix({2, 2}, diag({0.5, 0.5})), PreconditionError); // shape
  EXPECT_THROW(DensityMatrix({2}, diag({1, 0}), {.max_total_dim = 1}), PreconditionError);
  EXPECT_NO_THROW(DensityMatrix({2}, diag({1, 0})));
}

TEST(DensityMatrix, DimensionCap) {
  Rng rng(1);
  EXPECT_THROW(random_density({4097}, 1, rng), PreconditionError);
  EXPECT_NO_THROW(random_density({8}, 1, rng, 8));
}

TEST(PartialTrace, ProductStateReduction) {
  Rng rng(11);
  const DensityMatrix r1 = random_density({2}, 2, rng);
  const DensityMatrix r2 = random_density({3}, 3, rng);
  const DensityMatrix p = product_state({r1, r2});
  EXPECT_LE((partial_trace(p, {0}).matrix() - r1.matrix()).norm(), 1e-12);
  EXPECT_LE((partial_trace(p, {1}).matrix() - r2.matrix()).norm(), 1e-12);
  EXPECT_EQ(partial_trace(p, {1}).dims(), (Dims{3}));
}

TEST(PartialTrace, BellReductionIsMaximallyMixed) {
  const DensityMatrix bell = named_state("bell");
  EXPECT_LE((partial_trace(bell, {0}).matrix() - identity(2) / 2.0).norm(), 1e-15);
}

TEST(PartialTrace, MatchesBruteForceOracle) {
  Rng rng(2024);
  const Dims dims{2, 3, 2};
  const DensityMatrix rho = random_density(dims, 12, rng);
  const ComplexMatrix oracle = oracle::partial_trace(rho.matrix(), dims, {0, 2});
  EXPECT_LE((partial_trace(rho, {0, 2}).matrix() - oracle).norm(), 1e-12);
  // Tracing subsystem 2 (index 1) step by step gives the same thing.
  const DensityMatrix seq = partial_trace(partial_trace(rho, {0, 2}), {0, 1});
  EXPECT_LE((seq.matrix() - oracle).norm(), 1e-12);
}

TEST(PartialTrace, OrderIndependentAndValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const DensityMatrix rho = random_density({2, 2, 3, 2}, 24, rng);
    const DensityMatrix a = partial_trace(partial_trace(rho, {0, 1, 2}), {0, 2});
    const DensityMatrix b = partial_trace(partial_trace(rho, {0, 2, 3}), {0, 1});
    EXPECT_LE((a.matrix() - b.matrix()).norm(), 1e-12);
    EXPECT_EQ(a.dims(), (Dims{2, 3}));
    // Reduction is a valid density matrix.
    EXPECT_NO_THROW(DensityMatrix(a.dims(), a.matrix()));
  }
}

TEST(PartialTrace, RejectsBadKeepSets) {
  const DensityMatrix g = named_state("ghz");
  EXPECT_THROW(partial_trace(g, {}), PreconditionError);
  EXPECT_THROW(partial_trace(g, {3}), PreconditionError);
  EXPECT_THROW(partial_trace(g, {1, 1}), PreconditionError);
}

TEST(EigHermitian, DiagonalSortedDescending) {
  const auto sd = eig_hermitian(diag({3, 1, 2}));
  EXPECT_DOUBLE_EQ(sd.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(sd.eigenvalues(1), 2.0);
  EXPECT_DOUBLE_EQ(sd.eigenvalues(2), 1.0);
}

TEST(EigHermitian, PauliX) {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const auto sd = eig_hermitian(x);
  EXPECT_NEAR(sd.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(sd.eigenvalues(1), -1.0, 1e-15);
}

TEST(EigHermitian, ReconstructionAndOrthonormality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const ComplexMatrix a = random_hermitian(1 + seed % 17, rng);
    const auto sd = eig_hermitian(a);
    EXPECT_LE((a - reconstruct(sd)).norm(), 1e-10 * std::max(1.0, a.norm()));
    const auto n = sd.eigenvectors.cols();
    EXPECT_LE((sd.eigenvectors.adjoint() * sd.eigenvectors - ComplexMatrix::Identity(n, n)).norm(), 1e-10);
    // Independent Jacobi oracle agrees on the spectrum.
    const auto ev = oracle::eigenvalues(a);
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(sd.eigenvalues(i), ev[static_cast<std::size_t>(i)], 1e-10);
  }
}

TEST(EigHermitian, DensitySpectrumSumsToOne) {
  Rng rng(5);
  const DensityMatrix rho = random_density({3, 3}, 5, rng);
  EXPECT_NEAR(eigenvalues_hermitian(rho.matrix()).sum(), 1.0, 1e-10);
}

TEST(EigHermitian, RejectsNonHermitianWithDefect) {
  ComplexMatrix a = diag({1, 2});
  a(0, 1) = 1.0;
  try {
    eig_hermitian(a);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("||A - A^H||_F"), std::string::npos);
  }
  EXPECT_THROW(eig_hermitian(ComplexMatrix::Zero(2, 3)), PreconditionError);
}

TEST(RangeProjector, PureFullAndThreshold) {
  EXPECT_LE((range_projector(diag({1, 0})) - diag({1, 0})).norm(), 1e-14);
  EXPECT_LE((range_projector(diag({0.5, 0.5})) - identity(2)).norm(), 1e-14);
  EXPECT_LE((range_projector(diag({0.7, 0.3, 0}), 1e-12) - diag({1, 1, 0})).norm(), 1e-14);
  EXPECT_THROW(range_projector(diag({1, 0}), 0.0), PreconditionError);
}

TEST(RangeProjector, IdempotentHermitianAndReconstructs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const DensityMatrix rho = random_density({2, 3}, 1 + seed % 6, rng);
    const ComplexMatrix p = range_projector(rho);
    EXPECT_LE((p * p - p).norm(), 1e-10);
    EXPECT_LE((p - p.adjoint()).norm(), 1e-10);
    EXPECT_LE((p * rho.matrix() * p - rho.matrix()).norm(), 1e-10);
    EXPECT_EQ(numerical_rank(rho), 1 + seed % 6);
  }
}

TEST(SupportContained, Cases) {
  Rng rng(9);
  const DensityMatrix rho = random_density({3}, 2, rng);
  EXPECT_TRUE(support_contained(rho, rho));
  const DensityMatrix up({2}, diag({1, 0})), down({2}, diag({0, 1}));
  EXPECT_FALSE(support_contained(up, down));
  EXPECT_THROW(support_contained(up, rho), PreconditionError);
}

}  // namespace
}  // namespace qcorr
