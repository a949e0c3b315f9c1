#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/tensor.hpp"

namespace qcorr {

/// Disjoint nonempty clusters whose union is {0, ..., n-1}.
class Partition {
 public:
  Partition(std::size_t n_subsystems, std::vector<IndexSet> clusters)
      : n_(n_subsystems), clusters_(std::move(clusters)) {
    if (n_ == 0) throw PreconditionError("partition: no subsystems");
    if (clusters_.empty() || clusters_.size() > n_) {
      throw PreconditionError("partition: number of clusters must be in 1..N");
    }
    std::vector<bool> seen(n_, false);
    for (auto& c : clusters_) {
      c = normalize_index_set(std::move(c), n_, false, "partition cluster");
      for (std::size_t i : c) {
        if (seen[i]) {
          throw PreconditionError("partition: subsystem " + std::to_string(i + 1) +
                                  " appears in more than one cluster");
        }
        seen[i] = true;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw PreconditionError("partition: clusters do not cover every subsystem");
    }
  }

  /// Every subsystem in its own cluster.
  static Partition singletons(std::size_t n) {
    std::vector<IndexSet> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back({i});
    return Partition(n, std::move(c));
  }

  /// Builds a partition from a restricted growth string (block label per subsystem).
  static Partition from_rgs(const std::vector<std::size_t>& rgs) {
    std::size_t k = 0;
    for (std::size_t a : rgs) k = std::max(k, a + 1);
    std::vector<IndexSet> c(k);
    for (std::size_t i = 0; i < rgs.size(); ++i) c[rgs[i]].push_back(i);
    return Partition(rgs.size(), std::move(c));
  }

  std::size_t n_subsystems() const noexcept { return n_; }
  std::size_t size() const noexcept { return clusters_.size(); }
  const std::vector<IndexSet>& clusters() const noexcept { return clusters_; }
  const IndexSet& operator[](std::size_t k) const { return clusters_[k]; }

  bool operator==(const Partition&) const = default;

 private:
  std::size_t n_;
  std::vector<IndexSet> clusters_;
};

/// Bell number B_n (number of set partitions of an n-set).
inline std::size_t bell_number(std::size_t n) {
  // Bell triangle.
  std::vector<std::size_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

/// Calls f(rgs) for every restricted growth string of length n, in
/// lexicographic order: a[0] = 0 and a[i] <= 1 + max(a[0..i-1]).
template <typename F>
void for_each_restricted_growth_string(std::size_t n, F&& f) {
  if (n == 0) return;
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max(a[0..i])
  while (true) {
    f(static_cast<const std::vector<std::size_t>&>(a));
    // Rightmost position that can still be incremented.
    std::size_t i = n - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

/// All set partitions of {0..n-1} in restricted-growth-string lexicographic order.
inline std::vector<Partition> set_partitions(std::size_t n) {
  std::vector<Partition> out;
  for_each_restricted_growth_string(n, [&](const std::vector<std::size_t>& rgs) {
    out.push_back(Partition::from_rgs(rgs));
  });
  return out;
}

/// "{1}|{2,3}" with 1-based labels.
inline std::string format_index_set(const IndexSet& set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i] + 1;
  os << '}';
  return os.str();
}

inline std::string format_partition(const Partition& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += '|';
    out += format_index_set(p[k]);
  }
  return out;
}

}  // namespace qcorr
