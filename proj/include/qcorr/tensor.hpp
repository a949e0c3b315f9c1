#pragma once

// Dense complex matrices on multipartite Hilbert spaces.
//
// Composite basis index of a product basis state |i_1 ... i_N> is
//   sum_n i_n * prod_{m > n} d_m
// i.e. the first subsystem is the most significant digit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcorr/errors.hpp"

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;

/// Local dimensions d_1 ... d_N of a multipartite system.
using Dims = std::vector<std::size_t>;

/// 0-based subsystem indices. Normalized sets are sorted and duplicate free.
using IndexSet = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultMaxTotalDim = 4096;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDefaultRankCutoff = 1e-12;

inline std::size_t total_dim(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

/// ||A - A^H||_F.
inline double hermitian_defect(const ComplexMatrix& a) {
  return (a - a.adjoint()).norm();
}

inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = kHermitianTol) {
  return a.rows() == a.cols() && hermitian_defect(a) <= rel_tol * std::max(1.0, a.norm());
}

/// (A + A^H) / 2, exact Hermitian part.
inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  ComplexMatrix h = (a + a.adjoint()) * 0.5;
  return h;
}

inline ComplexMatrix identity(std::size_t n) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  ComplexMatrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i) {
    for (Eigen::Index j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

// -----------------------------------------------------------------------------
// Spectral decomposition

struct SpectralDecomposition {
  RealVector eigenvalues;     ///< descending
  ComplexMatrix eigenvectors; ///< columns orthonormal, column i pairs with eigenvalues(i)
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << "eig_hermitian: matrix is not square (" << a.rows() << "x" << a.cols() << ")";
    throw PreconditionError(os.str());
  }
  const double defect = hermitian_defect(a);
  const double bound = kHermitianTol * std::max(1.0, a.norm());
  if (defect > bound) {
    std::ostringstream os;
    os.precision(3);
    os << "eig_hermitian: matrix is not Hermitian, ||A - A^H||_F = " << std::scientific << defect
       << " exceeds " << bound;
    throw PreconditionError(os.str());
  }
}

}  // namespace detail

/// Hermitian eigendecomposition, eigenvalues sorted descending.
inline SpectralDecomposition eig_hermitian(const ComplexMatrix& a) {
  detail::require_hermitian(a);
  // The solver reads only the lower triangle; symmetrize so both halves agree.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(hermitian_part(a)));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  const Eigen::Index n = a.rows();
  SpectralDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

/// Eigenvalues only, descending. Cheaper than eig_hermitian.
inline RealVector eigenvalues_hermitian(const ComplexMatrix& a) {
  detail::require_hermitian(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(hermitian_part(a)),
                                                          Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues_hermitian: eigensolver did not converge");
  }
  RealVector ev = solver.eigenvalues().reverse();
  return ev;
}

/// V diag(lambda) V^H.
inline ComplexMatrix reconstruct(const SpectralDecomposition& sd) {
  ComplexMatrix scaled = sd.eigenvectors * sd.eigenvalues.cast<Complex>().asDiagonal();
  ComplexMatrix out = scaled * sd.eigenvectors.adjoint();
  return out;
}

// -----------------------------------------------------------------------------
// DensityMatrix

struct DensityValidation {
  std::size_t max_total_dim = kDefaultMaxTotalDim;
  bool check_psd = true;
};

/// Hermitian, unit-trace, positive-semidefinite operator on the product space
/// with local dimensions dims().
class DensityMatrix {
 public:
  /// Validates every invariant; throws PreconditionError on violation.
  DensityMatrix(Dims dims, ComplexMatrix mat, const DensityValidation& v = {})
      : dims_(std::move(dims)), mat_(std::move(mat)) {
    check_shape(v.max_total_dim);
    const double fro = mat_.norm();
    const double defect = hermitian_defect(mat_);
    if (defect > kHermitianTol * std::max(1.0, fro)) {
      throw PreconditionError(message("not Hermitian, ||rho - rho^H||_F = ", defect));
    }
    const double trace_err = std::abs(mat_.trace() - Complex{1.0, 0.0});
    if (trace_err > kTraceTol) {
      throw PreconditionError(message("trace differs from 1 by ", trace_err));
    }
    if (v.check_psd) {
      const RealVector ev = eigenvalues_hermitian(mat_);
      const double min_ev = ev.size() ? ev(ev.size() - 1) : 0.0;
      if (min_ev < -kPsdTol) {
        throw PreconditionError(message("not positive semidefinite, smallest eigenvalue ", min_ev));
      }
    }
  }

  /// Skips the Hermitian/trace/PSD checks; the caller guarantees them. Shape and
  /// the dimension cap are still enforced.
  static DensityMatrix trusted(Dims dims, ComplexMatrix mat,
                               std::size_t max_total_dim = kDefaultMaxTotalDim) {
    DensityMatrix rho(TrustedTag{}, std::move(dims), std::move(mat));
    rho.check_shape(max_total_dim);
    return rho;
  }

  const Dims& dims() const noexcept { return dims_; }
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t n_subsystems() const noexcept { return dims_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

  bool operator==(const DensityMatrix&) const = default;

 private:
  struct TrustedTag {};
  DensityMatrix(TrustedTag, Dims dims, ComplexMatrix mat)
      : dims_(std::move(dims)), mat_(std::move(mat)) {}

  void check_shape(std::size_t max_total_dim) const {
    if (dims_.empty()) throw PreconditionError("density matrix: empty dimension list");
    for (std::size_t d : dims_) {
      if (d < 1) throw PreconditionError("density matrix: local dimension must be >= 1");
    }
    const std::size_t d_total = total_dim(dims_);
    if (d_total > max_total_dim) {
      std::ostringstream os;
      os << "density matrix: total dimension " << d_total << " exceeds cap " << max_total_dim;
      throw PreconditionError(os.str());
    }
    if (static_cast<std::size_t>(mat_.rows()) != d_total ||
        static_cast<std::size_t>(mat_.cols()) != d_total) {
      std::ostringstream os;
      os << "density matrix: matrix is " << mat_.rows() << "x" << mat_.cols()
         << " but dims multiply to " << d_total;
      throw PreconditionError(os.str());
    }
  }

  static std::string message(const char* what, double value) {
    std::ostringstream os;
    os.precision(3);
    os << "density matrix: " << what << std::scientific << value;
    return os.str();
  }

  Dims dims_;
  ComplexMatrix mat_;
};

// -----------------------------------------------------------------------------
// Index sets

/// Sorted, duplicate-free copy of `set`; throws if empty (unless allowed) or
/// out of range for `n` subsystems.
inline IndexSet normalize_index_set(IndexSet set, std::size_t n, bool allow_empty = false,
                                    const char* what = "index set") {
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
    throw PreconditionError(std::string(what) + ": duplicate subsystem index");
  }
  if (set.empty() && !allow_empty) {
    throw PreconditionError(std::string(what) + ": must be nonempty");
  }
  if (!set.empty() && set.back() >= n) {
    std::ostringstream os;
    os << what << ": subsystem index " << set.back() + 1 << " out of range 1.." << n;
    throw PreconditionError(os.str());
  }
  return set;
}

// -----------------------------------------------------------------------------
// Partial trace

namespace detail {

/// Composite-index offsets contributed by the subsystems in `subset` (sorted),
/// enumerated in big-endian order over those subsystems.
inline std::vector<std::size_t> subset_offsets(const Dims& dims, const IndexSet& subset) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  std::vector<std::size_t> offsets{0};
  for (std::size_t s : subset) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[s]);
    for (std::size_t base : offsets) {
      for (std::size_t i = 0; i < dims[s]; ++i) next.push_back(base + i * stride[s]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace detail

/// Reduced state on the subsystems in `keep` (0-based). The result lists the
/// kept subsystems in their original relative order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, IndexSet keep) {
  const std::size_t n = rho.n_subsystems();
  keep = normalize_index_set(std::move(keep), n, false, "partial_trace keep set");
  if (keep.size() == n) return rho;

  IndexSet traced;
  for (std::size_t i = 0, j = 0; i < n; ++i) {
    if (j < keep.size() && keep[j] == i) {
      ++j;
    } else {
      traced.push_back(i);
    }
  }
  const auto kept_off = detail::subset_offsets(rho.dims(), keep);
  const auto traced_off = detail::subset_offsets(rho.dims(), traced);

  const auto& m = rho.matrix();
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc{0.0, 0.0};
      for (std::size_t t : traced_off) {
        acc += m(static_cast<Eigen::Index>(kept_off[r] + t), static_cast<Eigen::Index>(kept_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  Dims kept_dims;
  kept_dims.reserve(keep.size());
  for (std::size_t s : keep) kept_dims.push_back(rho.dims()[s]);
  return DensityMatrix::trusted(std::move(kept_dims), std::move(out));
}

// -----------------------------------------------------------------------------
// Supports

/// Orthogonal projector onto the span of eigenvectors with eigenvalue > cutoff.
inline ComplexMatrix range_projector(const ComplexMatrix& a, double cutoff = kDefaultRankCutoff) {
  if (!(cutoff > 0.0)) throw PreconditionError("range_projector: cutoff must be positive");
  const SpectralDecomposition sd = eig_hermitian(a);
  Eigen::Index rank = 0;
  while (rank < sd.eigenvalues.size() && sd.eigenvalues(rank) > cutoff) ++rank;
  const auto v = sd.eigenvectors.leftCols(rank);
  ComplexMatrix p = v * v.adjoint();
  return p;
}

inline ComplexMatrix range_projector(const DensityMatrix& rho, double cutoff = kDefaultRankCutoff) {
  return range_projector(rho.matrix(), cutoff);
}

/// Number of eigenvalues above cutoff.
inline std::size_t numerical_rank(const DensityMatrix& rho, double cutoff = kDefaultRankCutoff) {
  const RealVector ev = eigenvalues_hermitian(rho.matrix());
  return static_cast<std::size_t>((ev.array() > cutoff).count());
}

/// True iff ||(1 - P_sigma) rho (1 - P_sigma)||_F <= cutoff.
inline bool support_contained(const DensityMatrix& rho, const DensityMatrix& sigma,
                              double cutoff = kDefaultRankCutoff) {
  if (rho.dim() != sigma.dim()) {
    std::ostringstream os;
    os << "support_contained: dimension mismatch (" << rho.dim() << " vs " << sigma.dim() << ")";
    throw PreconditionError(os.str());
  }
  const ComplexMatrix q = identity(sigma.dim()) - range_projector(sigma, cutoff);
  return (q * rho.matrix() * q).norm() <= cutoff;
}

}  // namespace qcorr
