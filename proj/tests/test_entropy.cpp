#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qcorr/entropy.hpp"
#include "qcorr/states.hpp"

namespace qcorr {
namespace {

DensityMatrix diag_state(std::vector<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return DensityMatrix({d.size()}, m);
}

TEST(VonNeumann, Examples) {
  Rng rng(1);
  EXPECT_NEAR(von_neumann_entropy(random_pure({2, 3}, rng)), 0.0, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(named_state("max_mixed", {2})), 1.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(diag_state({0.5, 0.25, 0.25})), 1.5, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(named_state("max_mixed", {3})), std::log2(3.0), 1e-12);
  EXPECT_NEAR(von_neumann_entropy(named_state("max_mixed", {3}), LogBase::nats), std::log(3.0), 1e-12);
}

TEST(VonNeumann, BoundsAndUnitaryInvariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const DensityMatrix rho = random_density({2, 3}, 1 + seed % 6, rng);
    const double s = von_neumann_entropy(rho);
    EXPECT_GE(s, -1e-12);
    EXPECT_LE(s, std::log2(6.0) + 1e-12);
    EXPECT_NEAR(s, oracle::entropy_bits(oracle::eigenvalues(rho.matrix())), 1e-10);
    const DensityMatrix rotated = conjugate(rho, random_unitary(6, rng));
    EXPECT_NEAR(von_neumann_entropy(rotated), s, 1e-10);
  }
}

TEST(Shannon, Examples) {
  const std::vector<double> one{1.0}, half{0.5, 0.5}, q{0.5, 0.25, 0.25};
  EXPECT_EQ(shannon_entropy(one), 0.0);
  EXPECT_NEAR(shannon_entropy(half), 1.0, 1e-15);
  EXPECT_NEAR(shannon_entropy(q), 1.5, 1e-15);
  const std::vector<double> bad{0.5, 0.6}, neg{1.5, -0.5};
  EXPECT_THROW(shannon_entropy(bad), PreconditionError);
  EXPECT_THROW(shannon_entropy(neg), PreconditionError);
}

TEST(RelativeEntropy, Examples) {
  Rng rng(4);
  const DensityMatrix rho = random_density({3}, 3, rng);
  EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-10);
  EXPECT_NEAR(relative_entropy(diag_state({1, 0}), diag_state({0.5, 0.5})), 1.0, 1e-12);
  EXPECT_THROW(relative_entropy(diag_state({0.5, 0.5}), diag_state({1, 0})), SupportError);
}

TEST(RelativeEntropy, NonnegativeOnRandomPairs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const DensityMatrix a = random_density({2, 2}, 4, rng), b = random_density({2, 2}, 4, rng);
    EXPECT_GE(relative_entropy(a, b), -1e-10);
  }
}

TEST(ClusterEntropy, Examples) {
  Rng rng(2);
  const DensityMatrix rho = random_density({2, 2, 2}, 3, rng);
  EXPECT_DOUBLE_EQ(cluster_entropy(rho, {0, 1, 2}), von_neumann_entropy(rho));
  EXPECT_DOUBLE_EQ(cluster_entropy(rho, {1}), von_neumann_entropy(partial_trace(rho, {1})));
  EXPECT_NEAR(cluster_entropy(named_state("ghz"), {1, 2}), 1.0, 1e-12);
  EXPECT_THROW(cluster_entropy(rho, {}), PreconditionError);
  EXPECT_THROW(cluster_entropy(rho, {3}), PreconditionError);
}

TEST(ClusterEntropy, MatchesOracleOnEverySubset) {
  Rng rng(77);
  const Dims dims{2, 3, 2};
  const DensityMatrix rho = random_density(dims, 5, rng);
  EntropyTable t(rho);
  for (unsigned mask = 1; mask < 8; ++mask) {
    IndexSet c;
    for (std::size_t i = 0; i < 3; ++i) if (mask >> i & 1u) c.push_back(i);
    EXPECT_NEAR(t.entropy(c), oracle::cluster_entropy(rho.matrix(), dims, c), 1e-10);
  }
}

TEST(CorrelationInformation, Examples) {
  Rng rng(3);
  const DensityMatrix p = product_state(
      {random_density({2}, 2, rng), random_density({3}, 3, rng), random_density({2}, 2, rng)});
  EXPECT_NEAR(correlation_information(p), 0.0, 1e-10);
  EXPECT_NEAR(correlation_information(named_state("bell")), 2.0, 1e-12);
  EXPECT_NEAR(correlation_information(named_state("ghz")), 3.0, 1e-12);
}

TEST(WithinCluster, Examples) {
  const DensityMatrix ghz = named_state("ghz");
  EXPECT_EQ(within_cluster_information(ghz, {1}), 0.0);
  EXPECT_NEAR(within_cluster_information(ghz, {1, 2}), 1.0, 1e-12);
  Rng rng(5);
  const DensityMatrix p = product_state(
      {random_density({2, 2}, 4, rng), random_density({2}, 2, rng), random_density({2}, 2, rng)});
  EXPECT_NEAR(within_cluster_information(p, {2, 3}), 0.0, 1e-10);
}

TEST(AmongCluster, Examples) {
  const DensityMatrix ghz = named_state("ghz");
  EXPECT_NEAR(among_cluster_information(ghz, Partition::singletons(3)), 3.0, 1e-12);
  EXPECT_NEAR(among_cluster_information(ghz, Partition(3, {{0}, {1, 2}})), 2.0, 1e-12);
  Rng rng(6);
  const DensityMatrix p = product_state({random_density({2}, 2, rng), random_density({2, 2}, 4, rng)});
  EXPECT_NEAR(among_cluster_information(p, Partition(3, {{0}, {1, 2}})), 0.0, 1e-10);
  EXPECT_THROW(among_cluster_information(p, Partition::singletons(2)), PreconditionError);
}

TEST(MutualInformation, Examples) {
  EXPECT_NEAR(mutual_information(named_state("bell"), {0}, {1}), 2.0, 1e-12);
  EXPECT_NEAR(mutual_information(named_state("ghz"), {0}, {1, 2}), 2.0, 1e-12);
  Rng rng(7);
  const DensityMatrix p = product_state({random_density({2, 2}, 4, rng), random_density({2}, 2, rng)});
  EXPECT_NEAR(mutual_information(p, {0, 1}, {2}), 0.0, 1e-10);
  EXPECT_THROW(mutual_information(p, {0, 1}, {1}), PreconditionError);
}

TEST(MutualInformation, SymmetricAndMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const DensityMatrix rho = random_density({2, 2, 2}, 8, rng);
    const double i = mutual_information(rho, {0}, {1, 2});
    EXPECT_NEAR(i, mutual_information(rho, {1, 2}, {0}), 1e-12);
    EXPECT_NEAR(i, oracle::mutual_information(rho.matrix(), rho.dims(), {0}, {1, 2}), 1e-10);
    EXPECT_GE(i, -1e-10);
  }
}

TEST(SsaExcess, Examples) {
  Rng rng(8);
  const DensityMatrix p = product_state({random_density({2, 2}, 4, rng), random_density({2}, 2, rng)});
  EXPECT_NEAR(ssa_excess(p, {0}, {1, 2}, {2}), 0.0, 1e-10);
  EXPECT_NEAR(ssa_excess(named_state("ghz"), {0}, {1, 2}, {2}), 1.0, 1e-12);
  EXPECT_THROW(ssa_excess(p, {0}, {1, 2}, {1, 2}), PreconditionError);
  EXPECT_THROW(ssa_excess(p, {0}, {1}, {2}), PreconditionError);
}

TEST(SsaExcess, NonnegativeOnRandomStates) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const DensityMatrix rho = random_density({2, 2, 2, 2}, 1 + seed % 16, rng);
    EntropyTable t(rho);
    EXPECT_GE(t.ssa_excess({0}, {1, 2, 3}, {3}), -1e-9);
    EXPECT_GE(t.ssa_excess({0, 1}, {2, 3}, {2}), -1e-9);
  }
}

TEST(SplitTree, ParsingFreeConstruction) {
  const SplitTree t = SplitTree::node(SplitTree::leaf(0), SplitTree::node(SplitTree::leaf(1), SplitTree::leaf(2)));
  EXPECT_EQ(t.to_string(), "(1,(2,3))");
  EXPECT_EQ(SplitTree::caterpillar(4).to_string(), "(1,(2,(3,4)))");
  EXPECT_EQ(SplitTree::balanced(4).to_string(), "((1,2),(3,4))");
  EXPECT_NO_THROW(t.validate(3));
  EXPECT_THROW(t.validate(4), PreconditionError);
  const SplitTree dup = SplitTree::node(SplitTree::leaf(0), SplitTree::leaf(0));
  EXPECT_THROW(dup.validate(2), PreconditionError);
}

TEST(BinaryDecomposition, Examples) {
  const auto bell = binary_decomposition(named_state("bell"), SplitTree::caterpillar(2));
  ASSERT_EQ(bell.size(), 1u);
  EXPECT_NEAR(bell[0].value, 2.0, 1e-12);

  const auto ghz = binary_decomposition(named_state("ghz"), SplitTree::caterpillar(3));
  ASSERT_EQ(ghz.size(), 2u);
  EXPECT_EQ(ghz[0].label, "I({1},{2,3})");
  EXPECT_NEAR(ghz[0].value, 2.0, 1e-12);
  EXPECT_EQ(ghz[1].label, "I({2},{3})");
  EXPECT_NEAR(ghz[1].value, 1.0, 1e-12);

  Rng rng(9);
  const DensityMatrix p = product_state({random_density({2}, 2, rng), random_density({2}, 2, rng),
                                         random_density({2}, 2, rng), random_density({2}, 2, rng)});
  for (const auto& term : binary_decomposition(p, SplitTree::balanced(4))) EXPECT_NEAR(term.value, 0.0, 1e-10);
}

TEST(BinaryDecomposition, TreeShapesAgreeOnTotal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const DensityMatrix rho = random_density({2, 2, 2, 2}, 5, rng);
    double a = 0.0, b = 0.0;
    for (const auto& t : binary_decomposition(rho, SplitTree::balanced(4))) a += t.value;
    for (const auto& t : binary_decomposition(rho, SplitTree::caterpillar(4))) b += t.value;
    EXPECT_NEAR(a, b, 1e-10);
    EXPECT_NEAR(a, correlation_information(rho), 1e-10);
  }
}

}  // namespace
}  // namespace qcorr
