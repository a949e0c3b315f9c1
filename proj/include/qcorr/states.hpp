#pragma once

// Seeded generators for random states and for the structured mixture families
// (product cuts, biorthogonal, monoorthogonal, SSA-equality family).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/tensor.hpp"

namespace qcorr {

/// Deterministic pseudorandom source. The normal deviates are produced by
/// Box-Muller on top of mt19937_64 so the stream does not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal divided out.
inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  const Eigen::MatrixXcd g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return ComplexMatrix(q);
}

/// rho = G G^H / tr(G G^H) with G a D x rank complex Gaussian matrix.
inline DensityMatrix random_density(const Dims& dims, std::size_t rank, Rng& rng,
                                    std::size_t max_total_dim = kDefaultMaxTotalDim) {
  const std::size_t d = total_dim(dims);
  if (d > max_total_dim) {
    throw PreconditionError("random_density: total dimension " + std::to_string(d) +
                            " exceeds cap " + std::to_string(max_total_dim));
  }
  if (rank < 1 || rank > d) {
    throw PreconditionError("random_density: rank " + std::to_string(rank) +
                            " outside 1.." + std::to_string(d));
  }
  const ComplexMatrix g = random_ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::trusted(dims, hermitian_part(rho), max_total_dim);
}

inline DensityMatrix random_pure(const Dims& dims, Rng& rng,
                                 std::size_t max_total_dim = kDefaultMaxTotalDim) {
  return random_density(dims, 1, rng, max_total_dim);
}

/// Kronecker product of the factors with concatenated dims.
inline DensityMatrix product_state(std::span<const DensityMatrix> factors,
                                   std::size_t max_total_dim = kDefaultMaxTotalDim) {
  if (factors.empty()) throw PreconditionError("product_state: no factors");
  Dims dims;
  std::size_t d = 1;
  for (const auto& f : factors) {
    dims.insert(dims.end(), f.dims().begin(), f.dims().end());
    d *= f.dim();
  }
  if (d > max_total_dim) {
    throw PreconditionError("product_state: total dimension " + std::to_string(d) +
                            " exceeds cap " + std::to_string(max_total_dim));
  }
  ComplexMatrix m = factors.front().matrix();
  for (std::size_t i = 1; i < factors.size(); ++i) m = kron(m, factors[i].matrix());
  return DensityMatrix::trusted(std::move(dims), std::move(m), max_total_dim);
}

inline DensityMatrix product_state(std::initializer_list<DensityMatrix> factors) {
  return product_state(std::span<const DensityMatrix>(factors.begin(), factors.size()));
}

/// U rho U^H with the same dims.
inline DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& u) {
  ComplexMatrix m = u * rho.matrix() * u.adjoint();
  return DensityMatrix::trusted(rho.dims(), hermitian_part(m));
}

// -----------------------------------------------------------------------------
// Mixtures

inline constexpr double kMinWeight = 1e-12;
inline constexpr double kMixtureWeightSumTol = 1e-12;

/// Weighted ensemble sum_k w_k rho^k of states with identical dims.
class Mixture {
 public:
  Mixture(std::vector<double> weights, std::vector<DensityMatrix> components)
      : weights_(std::move(weights)), components_(std::move(components)) {
    if (weights_.empty()) throw PreconditionError("mixture: no components");
    if (weights_.size() != components_.size()) {
      throw PreconditionError("mixture: " + std::to_string(weights_.size()) + " weights for " +
                              std::to_string(components_.size()) + " components");
    }
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w > kMinWeight)) throw PreconditionError("mixture: weights must be > 1e-12");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kMixtureWeightSumTol) {
      throw PreconditionError("mixture: weights do not sum to 1");
    }
    for (const auto& c : components_) {
      if (c.dims() != components_.front().dims()) {
        throw PreconditionError("mixture: components have different dims");
      }
    }
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<DensityMatrix>& components() const noexcept { return components_; }
  const Dims& dims() const { return components_.front().dims(); }

  /// sum_k w_k rho^k.
  DensityMatrix mixed() const {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(components_.front().dim()),
                                          static_cast<Eigen::Index>(components_.front().dim()));
    for (std::size_t k = 0; k < size(); ++k) m += weights_[k] * components_[k].matrix();
    return DensityMatrix::trusted(dims(), std::move(m));
  }

  /// Mixture of the reductions onto `keep`.
  Mixture reduced(const IndexSet& keep) const {
    std::vector<DensityMatrix> r;
    r.reserve(size());
    for (const auto& c : components_) r.push_back(partial_trace(c, keep));
    return Mixture(weights_, std::move(r));
  }

  bool operator==(const Mixture&) const = default;

 private:
  std::vector<double> weights_;
  std::vector<DensityMatrix> components_;
};

/// Block dimensions b_s^k for each constrained subsystem s (outer) and mixture
/// component k (inner). Block k occupies the coordinates after blocks 0..k-1.
struct BlockAllocation {
  std::vector<std::vector<std::size_t>> blocks;

  std::size_t components() const { return blocks.empty() ? 0 : blocks.front().size(); }

  void validate(std::span<const std::size_t> local_dims, std::size_t expected_k,
                const char* who) const {
    if (blocks.size() != local_dims.size()) {
      throw PreconditionError(std::string(who) + ": block allocation must cover " +
                              std::to_string(local_dims.size()) + " subsystem(s)");
    }
    for (std::size_t s = 0; s < blocks.size(); ++s) {
      if (blocks[s].size() != expected_k) {
        throw PreconditionError(std::string(who) + ": subsystem " + std::to_string(s + 1) +
                                " has " + std::to_string(blocks[s].size()) + " blocks, expected " +
                                std::to_string(expected_k));
      }
      std::size_t used = 0;
      for (std::size_t b : blocks[s]) {
        if (b < 1) throw PreconditionError(std::string(who) + ": block dimension must be >= 1");
        used += b;
      }
      if (used > local_dims[s]) {
        throw PreconditionError(std::string(who) + ": blocks on subsystem " +
                                std::to_string(s + 1) + " need " + std::to_string(used) +
                                " dimensions, only " + std::to_string(local_dims[s]) +
                                " available");
      }
    }
  }

  std::size_t offset(std::size_t s, std::size_t k) const {
    std::size_t o = 0;
    for (std::size_t j = 0; j < k; ++j) o += blocks[s][j];
    return o;
  }
};

struct MixtureOptions {
  std::size_t component_rank = 0;  ///< 0 = full rank within the block
  bool local_unitary = false;      ///< conjugate by a seeded U_1 (x) U_2 (x) ...
};

namespace detail {

/// Places a state on a (b1 x b2) block into the (d1 x d2) space at offsets (o1, o2).
inline ComplexMatrix embed_block(const ComplexMatrix& block, std::size_t b1, std::size_t b2,
                                 std::size_t d1, std::size_t d2, std::size_t o1, std::size_t o2) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d1 * d2),
                                          static_cast<Eigen::Index>(d1 * d2));
  for (std::size_t a = 0; a < b1; ++a) {
    for (std::size_t b = 0; b < b2; ++b) {
      for (std::size_t a2 = 0; a2 < b1; ++a2) {
        for (std::size_t bb = 0; bb < b2; ++bb) {
          out(static_cast<Eigen::Index>((o1 + a) * d2 + o2 + b),
              static_cast<Eigen::Index>((o1 + a2) * d2 + o2 + bb)) =
              block(static_cast<Eigen::Index>(a * b2 + b), static_cast<Eigen::Index>(a2 * b2 + bb));
        }
      }
    }
  }
  return out;
}

inline std::size_t block_rank(std::size_t requested, std::size_t block_dim) {
  return requested == 0 ? block_dim : std::min(requested, block_dim);
}

inline ComplexMatrix local_unitary(const Dims& dims, Rng& rng) {
  ComplexMatrix u = random_unitary(dims.front(), rng);
  for (std::size_t i = 1; i < dims.size(); ++i) u = kron(u, random_unitary(dims[i], rng));
  return u;
}

inline Mixture conjugate_all(const Mixture& m, const ComplexMatrix& u) {
  std::vector<DensityMatrix> c;
  for (const auto& rho : m.components()) c.push_back(conjugate(rho, u));
  return Mixture(m.weights(), std::move(c));
}

}  // namespace detail

/// Bipartite mixture whose components live on (block k of H_1) (x) (block k of
/// H_2), so both single-subsystem reductions are mutually orthogonal.
inline Mixture biorthogonal_mixture(std::size_t d1, std::size_t d2, const BlockAllocation& alloc,
                                    const std::vector<double>& weights, Rng& rng,
                                    const MixtureOptions& opts = {}) {
  const std::size_t k_count = weights.size();
  const std::size_t local[] = {d1, d2};
  alloc.validate(local, k_count, "biorthogonal_mixture");
  std::vector<DensityMatrix> comps;
  for (std::size_t k = 0; k < k_count; ++k) {
    const std::size_t b1 = alloc.blocks[0][k], b2 = alloc.blocks[1][k];
    const DensityMatrix block =
        random_density({b1, b2}, detail::block_rank(opts.component_rank, b1 * b2), rng);
    comps.push_back(DensityMatrix::trusted(
        {d1, d2}, detail::embed_block(block.matrix(), b1, b2, d1, d2, alloc.offset(0, k),
                                      alloc.offset(1, k))));
  }
  Mixture m(weights, std::move(comps));
  if (opts.local_unitary) m = detail::conjugate_all(m, detail::local_unitary({d1, d2}, rng));
  return m;
}

struct MonoorthogonalOptions : MixtureOptions {
  /// Components rho_2^k (x) rho_3 with one shared rho_3.
  bool shared_product_third = false;
};

/// Mixture on subsystems (2, 3) whose 2-reductions live on disjoint blocks of
/// H_2; subsystem 3 is unconstrained.
inline Mixture monoorthogonal_mixture(std::size_t d2, std::size_t d3, const BlockAllocation& alloc,
                                      const std::vector<double>& weights, Rng& rng,
                                      const MonoorthogonalOptions& opts = {}) {
  const std::size_t k_count = weights.size();
  const std::size_t local[] = {d2};
  alloc.validate(local, k_count, "monoorthogonal_mixture");
  std::optional<DensityMatrix> shared;
  if (opts.shared_product_third) {
    shared = random_density({d3}, detail::block_rank(opts.component_rank, d3), rng);
  }
  std::vector<DensityMatrix> comps;
  for (std::size_t k = 0; k < k_count; ++k) {
    const std::size_t b2 = alloc.blocks[0][k];
    ComplexMatrix block;
    if (shared) {
      const DensityMatrix r2 = random_density({b2}, detail::block_rank(opts.component_rank, b2), rng);
      block = kron(r2.matrix(), shared->matrix());
    } else {
      block = random_density({b2, d3}, detail::block_rank(opts.component_rank, b2 * d3), rng).matrix();
    }
    comps.push_back(DensityMatrix::trusted(
        {d2, d3}, detail::embed_block(block, b2, d3, d2, d3, alloc.offset(0, k), 0)));
  }
  Mixture m(weights, std::move(comps));
  if (opts.local_unitary) m = detail::conjugate_all(m, detail::local_unitary({d2, d3}, rng));
  return m;
}

/// How the third-subsystem factors rho_3^k of the SSA-equality family are chosen.
enum class ThirdFactor {
  independent,     ///< sampled independently per k, checked pairwise distinct
  orthogonal_pure, ///< |k><k|, requires K <= d_3
  shared,          ///< one rho_3 for every k
};

inline constexpr double kDistinctnessTol = 1e-6;

struct Theorem2Instance {
  DensityMatrix state;                ///< sum_k w_k rho_12^k (x) rho_3^k
  Mixture mixture;                    ///< tripartite components
  Mixture bipartite;                  ///< the rho_12^k
  std::vector<DensityMatrix> third;   ///< the rho_3^k
};

/// Mixture of product components rho_12^k (x) rho_3^k over a biorthogonal
/// family rho_12^k. Every component has zero SSA excess I(1:23) - I(1:2), and
/// so does the mixture.
inline Theorem2Instance theorem2_family(const Dims& dims, const BlockAllocation& alloc,
                                        const std::vector<double>& weights, Rng& rng,
                                        ThirdFactor third = ThirdFactor::independent,
                                        const MixtureOptions& opts = {}) {
  if (dims.size() != 3) throw PreconditionError("theorem2_family: need three local dimensions");
  const std::size_t k_count = weights.size();
  const std::size_t d3 = dims[2];
  if (third == ThirdFactor::orthogonal_pure && k_count > d3) {
    throw PreconditionError("theorem2_family: " + std::to_string(k_count) +
                            " orthogonal pure third factors do not fit in dimension " +
                            std::to_string(d3));
  }
  MixtureOptions inner = opts;
  inner.local_unitary = false;
  Mixture bi = biorthogonal_mixture(dims[0], dims[1], alloc, weights, rng, inner);

  std::vector<DensityMatrix> thirds;
  switch (third) {
    case ThirdFactor::independent:
      for (std::size_t k = 0; k < k_count; ++k) {
        thirds.push_back(random_density({d3}, detail::block_rank(opts.component_rank, d3), rng));
      }
      for (std::size_t k = 0; k < k_count; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
          if ((thirds[k].matrix() - thirds[j].matrix()).norm() <= kDistinctnessTol) {
            throw PreconditionError("theorem2_family: third factors " + std::to_string(j + 1) +
                                    " and " + std::to_string(k + 1) + " are not distinct");
          }
        }
      }
      break;
    case ThirdFactor::orthogonal_pure:
      for (std::size_t k = 0; k < k_count; ++k) {
        ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(d3), static_cast<Eigen::Index>(d3));
        p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
        thirds.push_back(DensityMatrix::trusted({d3}, std::move(p)));
      }
      break;
    case ThirdFactor::shared: {
      const DensityMatrix r3 = random_density({d3}, detail::block_rank(opts.component_rank, d3), rng);
      thirds.assign(k_count, r3);
      break;
    }
  }

  std::optional<ComplexMatrix> u;
  if (opts.local_unitary) u = detail::local_unitary(dims, rng);
  std::vector<DensityMatrix> comps;
  for (std::size_t k = 0; k < k_count; ++k) {
    DensityMatrix c = product_state({bi.components()[k], thirds[k]});
    comps.push_back(u ? conjugate(c, *u) : std::move(c));
  }
  if (u) {
    // Keep the bipartite and third-factor views consistent with the rotated state.
    std::vector<DensityMatrix> r12, r3;
    for (const auto& c : comps) {
      r12.push_back(partial_trace(c, {0, 1}));
      r3.push_back(partial_trace(c, {2}));
    }
    bi = Mixture(weights, std::move(r12));
    thirds = std::move(r3);
  }
  Mixture tri(weights, std::move(comps));
  DensityMatrix state = tri.mixed();
  return {std::move(state), std::move(tri), std::move(bi), std::move(thirds)};
}

/// Independent random components, no orthogonality structure.
inline Mixture random_mixture(const Dims& dims, const std::vector<double>& weights, Rng& rng,
                              std::size_t component_rank = 0) {
  std::vector<DensityMatrix> comps;
  const std::size_t d = total_dim(dims);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    comps.push_back(random_density(dims, detail::block_rank(component_rank, d), rng));
  }
  return Mixture(weights, std::move(comps));
}

/// Components on disjoint coordinate blocks of the whole space, so
/// rho^k rho^k' = 0 for k != k'. `blocks` partitions (part of) 0..D-1.
inline Mixture orthogonal_mixture(const Dims& dims, const std::vector<std::size_t>& blocks,
                                  const std::vector<double>& weights, Rng& rng,
                                  const MixtureOptions& opts = {}) {
  const std::size_t d = total_dim(dims);
  const std::size_t local[] = {d};
  const BlockAllocation alloc{{blocks}};
  alloc.validate(local, weights.size(), "orthogonal_mixture");
  std::vector<DensityMatrix> comps;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const std::size_t b = blocks[k];
    const DensityMatrix block = random_density({b}, detail::block_rank(opts.component_rank, b), rng);
    comps.push_back(DensityMatrix::trusted(
        dims, detail::embed_block(block.matrix(), b, 1, d, 1, alloc.offset(0, k), 0)));
  }
  Mixture m(weights, std::move(comps));
  if (opts.local_unitary) m = detail::conjugate_all(m, detail::local_unitary(dims, rng));
  return m;
}

// -----------------------------------------------------------------------------
// Textbook states

/// bell (dims 2,2), ghz (2,2,2), w3 (2,2,2), max_mixed (any dims).
inline DensityMatrix named_state(std::string_view name, const Dims& dims = {}) {
  auto pure = [](Dims d, std::vector<std::pair<std::size_t, double>> amps) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total_dim(d)));
    for (auto [i, a] : amps) psi(static_cast<Eigen::Index>(i)) = a;
    ComplexMatrix m = psi * psi.adjoint();
    return DensityMatrix::trusted(std::move(d), std::move(m));
  };
  const double h = std::numbers::sqrt2 / 2.0;
  if (name == "bell") return pure({2, 2}, {{0b00, h}, {0b11, h}});
  if (name == "ghz") return pure({2, 2, 2}, {{0b000, h}, {0b111, h}});
  if (name == "w3") {
    const double t = 1.0 / std::sqrt(3.0);
    return pure({2, 2, 2}, {{0b001, t}, {0b010, t}, {0b100, t}});
  }
  if (name == "max_mixed" || name == "max-mixed") {
    if (dims.empty()) throw PreconditionError("named_state: max_mixed needs dims");
    const std::size_t d = total_dim(dims);
    ComplexMatrix m = identity(d) / static_cast<double>(d);
    return DensityMatrix::trusted(dims, std::move(m));
  }
  throw PreconditionError("named_state: unknown state '" + std::string(name) + "'");
}

}  // namespace qcorr
