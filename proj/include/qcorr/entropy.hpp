#pragma once

// Entropy functionals and correlation information over cluster partitions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/partition.hpp"
#include "qcorr/tensor.hpp"

namespace qcorr {

enum class LogBase { bits, nats };

inline double log_base(double x, LogBase base) {
  return base == LogBase::bits ? std::log2(x) : std::log(x);
}

/// Multiply a value in `base` by this to get nats.
inline double to_nats_factor(LogBase base) {
  return base == LogBase::bits ? std::numbers::ln2 : 1.0;
}

inline constexpr double kWeightSumTol = 1e-10;

/// -sum lambda log lambda with 0 log 0 = 0. Slightly negative eigenvalues
/// (numerical noise) are clipped to zero.
inline double spectrum_entropy(std::span<const double> eigenvalues, LogBase base) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l > 0.0) s -= l * log_base(l, base);
  }
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::bits) {
  const RealVector ev = eigenvalues_hermitian(rho.matrix());
  return std::max(0.0, spectrum_entropy({ev.data(), static_cast<std::size_t>(ev.size())}, base));
}

inline void validate_probability_vector(std::span<const double> w, const char* what = "weights") {
  if (w.empty()) throw PreconditionError(std::string(what) + ": empty probability vector");
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw PreconditionError(std::string(what) + ": negative or NaN entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    std::ostringstream os;
    os << what << ": entries sum to " << sum << ", not 1";
    throw PreconditionError(os.str());
  }
}

/// H(w) = -sum w log w.
inline double shannon_entropy(std::span<const double> weights, LogBase base = LogBase::bits) {
  validate_probability_vector(weights);
  return spectrum_entropy(weights, base);
}

/// S(rho || sigma) = tr rho log rho - tr rho log sigma. Eigenvalues of sigma at
/// or below `cutoff` count as zero; throws SupportError when rho has weight
/// outside the support of sigma.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                               LogBase base = LogBase::bits,
                               double cutoff = kDefaultRankCutoff) {
  if (rho.dim() != sigma.dim()) {
    throw PreconditionError("relative_entropy: dimension mismatch");
  }
  const SpectralDecomposition s = eig_hermitian(sigma.matrix());
  Eigen::Index rank = 0;
  while (rank < s.eigenvalues.size() && s.eigenvalues(rank) > cutoff) ++rank;

  const auto vs = s.eigenvectors.leftCols(rank);
  // rho restricted to the orthogonal complement of supp(sigma).
  const ComplexMatrix q = identity(sigma.dim()) - vs * vs.adjoint();
  const double outside = (q * rho.matrix() * q).norm();
  if (outside > cutoff) {
    std::ostringstream os;
    os.precision(3);
    os << "relative_entropy: support not contained (weight outside supp(sigma) "
       << std::scientific << outside << ")";
    throw SupportError(os.str());
  }

  const RealVector rho_ev = eigenvalues_hermitian(rho.matrix());
  double rho_log_rho = 0.0;
  for (double l : rho_ev) {
    if (l > 0.0) rho_log_rho += l * log_base(l, base);
  }
  // tr(rho log sigma) = sum_j <s_j|rho|s_j> log mu_j over the support of sigma.
  double rho_log_sigma = 0.0;
  for (Eigen::Index j = 0; j < rank; ++j) {
    const Complex diag = vs.col(j).dot(rho.matrix() * vs.col(j));
    rho_log_sigma += diag.real() * log_base(s.eigenvalues(j), base);
  }
  return rho_log_rho - rho_log_sigma;
}

// -----------------------------------------------------------------------------
// Cluster functionals

/// Memoized subset entropies of one state. Each distinct cluster is reduced
/// and diagonalized once.
class EntropyTable {
 public:
  explicit EntropyTable(const DensityMatrix& rho, LogBase base = LogBase::bits)
      : rho_(rho), base_(base) {
    if (rho.n_subsystems() > 63) throw PreconditionError("entropy table: more than 63 subsystems");
  }

  const DensityMatrix& state() const noexcept { return rho_; }
  LogBase base() const noexcept { return base_; }
  std::size_t n_subsystems() const noexcept { return rho_.n_subsystems(); }

  /// S(rho_C).
  double entropy(const IndexSet& cluster) {
    const IndexSet c = normalize_index_set(cluster, n_subsystems(), false, "cluster");
    std::uint64_t mask = 0;
    for (std::size_t i : c) mask |= std::uint64_t{1} << i;
    if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
    const double s = von_neumann_entropy(partial_trace(rho_, c), base_);
    cache_.emplace(mask, s);
    return s;
  }

  IndexSet all() const {
    IndexSet c(n_subsystems());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = i;
    return c;
  }

  /// sum_n S_n - S_{1..N}.
  double correlation_information() {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_subsystems(); ++i) sum += entropy({i});
    return sum - entropy(all());
  }

  /// sum_{n in C} S_n - S_C. Exactly zero for a singleton.
  double within_cluster_information(const IndexSet& cluster) {
    const IndexSet c = normalize_index_set(cluster, n_subsystems(), false, "cluster");
    if (c.size() == 1) return 0.0;
    double sum = 0.0;
    for (std::size_t i : c) sum += entropy({i});
    return sum - entropy(c);
  }

  /// sum_k S_{C_k} - S_{1..N}.
  double among_cluster_information(const Partition& p) {
    if (p.n_subsystems() != n_subsystems()) {
      throw PreconditionError("among_cluster_information: partition is for " +
                              std::to_string(p.n_subsystems()) + " subsystems, state has " +
                              std::to_string(n_subsystems()));
    }
    double sum = 0.0;
    for (const auto& c : p.clusters()) sum += entropy(c);
    return sum - entropy(all());
  }

  /// S_A + S_B - S_{AB} for disjoint nonempty A, B.
  double mutual_information(const IndexSet& a, const IndexSet& b) {
    const IndexSet na = normalize_index_set(a, n_subsystems(), false, "cluster A");
    const IndexSet nb = normalize_index_set(b, n_subsystems(), false, "cluster B");
    IndexSet ab;
    std::set_union(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(ab));
    if (ab.size() != na.size() + nb.size()) {
      throw PreconditionError("mutual_information: clusters overlap");
    }
    return entropy(na) + entropy(nb) - entropy(ab);
  }

  /// I(a : b) - I(a : b \ discard). Nonnegative by strong subadditivity.
  double ssa_excess(const IndexSet& a, const IndexSet& b, const IndexSet& discard) {
    const IndexSet nb = normalize_index_set(b, n_subsystems(), false, "cluster b");
    const IndexSet nd = normalize_index_set(discard, n_subsystems(), true, "discard set");
    if (!std::includes(nb.begin(), nb.end(), nd.begin(), nd.end()) || nd.size() >= nb.size()) {
      throw PreconditionError("ssa_excess: discard set " + format_index_set(nd) +
                              " is not strictly inside " + format_index_set(nb));
    }
    IndexSet kept;
    std::set_difference(nb.begin(), nb.end(), nd.begin(), nd.end(), std::back_inserter(kept));
    const double full = mutual_information(a, nb);
    return full - mutual_information(a, kept);
  }

 private:
  const DensityMatrix& rho_;
  LogBase base_;
  std::unordered_map<std::uint64_t, double> cache_;
};

inline double cluster_entropy(const DensityMatrix& rho, const IndexSet& cluster,
                              LogBase base = LogBase::bits) {
  return EntropyTable(rho, base).entropy(cluster);
}

inline double correlation_information(const DensityMatrix& rho, LogBase base = LogBase::bits) {
  return EntropyTable(rho, base).correlation_information();
}

inline double within_cluster_information(const DensityMatrix& rho, const IndexSet& cluster,
                                         LogBase base = LogBase::bits) {
  return EntropyTable(rho, base).within_cluster_information(cluster);
}

inline double among_cluster_information(const DensityMatrix& rho, const Partition& p,
                                        LogBase base = LogBase::bits) {
  return EntropyTable(rho, base).among_cluster_information(p);
}

inline double mutual_information(const DensityMatrix& rho, const IndexSet& a, const IndexSet& b,
                                 LogBase base = LogBase::bits) {
  return EntropyTable(rho, base).mutual_information(a, b);
}

inline double ssa_excess(const DensityMatrix& rho, const IndexSet& a, const IndexSet& b,
                         const IndexSet& discard, LogBase base = LogBase::bits) {
  return EntropyTable(rho, base).ssa_excess(a, b, discard);
}

// -----------------------------------------------------------------------------
// Successive binary splits

/// Full binary tree whose leaves are single subsystems.
class SplitTree {
 public:
  static SplitTree leaf(std::size_t subsystem) {
    SplitTree t;
    t.leaf_ = subsystem;
    return t;
  }
  static SplitTree node(SplitTree left, SplitTree right) {
    SplitTree t;
    t.children_.push_back(std::move(left));
    t.children_.push_back(std::move(right));
    return t;
  }

  bool is_leaf() const noexcept { return children_.empty(); }
  std::size_t leaf_index() const noexcept { return leaf_; }
  const SplitTree& left() const { return children_.at(0); }
  const SplitTree& right() const { return children_.at(1); }

  /// Leaf subsystems, sorted.
  IndexSet leaves() const {
    IndexSet out;
    collect(out);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Throws unless the leaves are exactly {0..n-1}, each once.
  void validate(std::size_t n) const {
    IndexSet l;
    collect(l);
    std::sort(l.begin(), l.end());
    if (std::adjacent_find(l.begin(), l.end()) != l.end()) {
      throw PreconditionError("split tree: a subsystem appears in more than one leaf");
    }
    if (l.size() != n || (n && l.back() != n - 1)) {
      throw PreconditionError("split tree: leaves must be exactly the subsystems 1.." +
                              std::to_string(n));
    }
  }

  /// "(1,(2,3))" with 1-based labels.
  std::string to_string() const {
    if (is_leaf()) return std::to_string(leaf_ + 1);
    return "(" + left().to_string() + "," + right().to_string() + ")";
  }

  /// Splits off one subsystem at a time: (1,(2,(3,4))).
  static SplitTree caterpillar(std::size_t n) {
    if (n == 0) throw PreconditionError("split tree: no subsystems");
    SplitTree t = leaf(n - 1);
    for (std::size_t i = n - 1; i-- > 0;) t = node(leaf(i), std::move(t));
    return t;
  }

  /// Halves recursively.
  static SplitTree balanced(std::size_t n) {
    if (n == 0) throw PreconditionError("split tree: no subsystems");
    return balanced_range(0, n);
  }

 private:
  SplitTree() = default;

  static SplitTree balanced_range(std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return leaf(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    return node(balanced_range(lo, mid), balanced_range(mid, hi));
  }

  void collect(IndexSet& out) const {
    if (is_leaf()) {
      out.push_back(leaf_);
      return;
    }
    for (const auto& c : children_) c.collect(out);
  }

  std::size_t leaf_ = 0;
  std::vector<SplitTree> children_;
};

struct BinaryTerm {
  std::string label;  ///< "I({1},{2,3})"
  double value;
};

/// One mutual-information term per internal node, pre-order. The terms sum to
/// the correlation information.
inline std::vector<BinaryTerm> binary_decomposition(EntropyTable& table, const SplitTree& tree) {
  tree.validate(table.n_subsystems());
  std::vector<BinaryTerm> out;
  auto visit = [&](const SplitTree& t, auto&& self) -> void {
    if (t.is_leaf()) return;
    const IndexSet a = t.left().leaves();
    const IndexSet b = t.right().leaves();
    out.push_back({"I(" + format_index_set(a) + "," + format_index_set(b) + ")",
                   table.mutual_information(a, b)});
    self(t.left(), self);
    self(t.right(), self);
  };
  visit(tree, visit);
  return out;
}

inline std::vector<BinaryTerm> binary_decomposition(const DensityMatrix& rho, const SplitTree& tree,
                                                    LogBase base = LogBase::bits) {
  EntropyTable table(rho, base);
  return binary_decomposition(table, tree);
}

}  // namespace qcorr
