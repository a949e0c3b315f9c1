#include <gtest/gtest.h>

#include <set>

#include "qcorr/partition.hpp"

namespace qcorr {
namespace {

TEST(Partition, ValidatesCover) {
  EXPECT_NO_THROW(Partition(3, {{0}, {1, 2}}));
  EXPECT_THROW(Partition(3, {{0}, {1}}), PreconditionError);           // 2 missing
  EXPECT_THROW(Partition(3, {{0, 1}, {1, 2}}), PreconditionError);     // overlap
  EXPECT_THROW(Partition(3, {{0}, {}, {1, 2}}), PreconditionError);    // empty cluster
  EXPECT_THROW(Partition(2, {{0}, {1, 2}}), PreconditionError);        // out of range
}

TEST(Partition, BellNumbers) {
  const std::size_t expected[] = {1, 1, 2, 5, 15, 52, 203};
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(bell_number(n), expected[n]);
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(set_partitions(n).size(), expected[n]);
}

TEST(Partition, RestrictedGrowthOrderForThree) {
  std::vector<std::vector<std::size_t>> seen;
  for_each_restricted_growth_string(3, [&](const auto& a) { seen.push_back(a); });
  const std::vector<std::vector<std::size_t>> expected{
      {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
  EXPECT_EQ(seen, expected);
  const auto parts = set_partitions(3);
  EXPECT_EQ(format_partition(parts[0]), "{1,2,3}");
  EXPECT_EQ(format_partition(parts[2]), "{1,3}|{2}");
  EXPECT_EQ(format_partition(parts[4]), "{1}|{2}|{3}");
}

TEST(Partition, EnumerationIsExhaustiveAndDistinct) {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::set<std::string> distinct;
    for (const auto& p : set_partitions(n)) distinct.insert(format_partition(p));
    EXPECT_EQ(distinct.size(), bell_number(n));
  }
}

}  // namespace
}  // namespace qcorr
