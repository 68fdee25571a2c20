#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vortnet/adjacency.hpp"
#include "vortnet/sampling.hpp"

namespace vortnet {

enum class Method { power, sketch_svd, nystrom };

std::string_view to_string(Method method);
/// Accepts "power", "sketch_svd" (or "sketch") and "nystrom".
Method parse_method(std::string_view name);

/// Wall-clock seconds per phase.
struct PhaseTimes {
  double sketch = 0.0;
  double decompose = 0.0;
  double reconstruct = 0.0;

  double total() const { return sketch + decompose + reconstruct; }
};

/// k approximate eigenpairs of a symmetric operator.
///
/// Columns of `vectors` have unit norm and follow the sign convention of
/// fix_signs(); `values` are in descending algebraic order.
struct EigenApproximation {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
  Method method = Method::power;
  std::optional<SampleIndexSet> sample;
  PhaseTimes times;
  /// Column norms before renormalization (Nystrom); ones otherwise.
  Eigen::VectorXd raw_norms;
  /// Fewer than the requested k pairs survived the rank cutoff.
  bool rank_deficient = false;
  /// Power iteration only: iterations and final successive-iterate gap per pair.
  std::vector<std::size_t> iterations;
  std::vector<double> residuals;

  std::size_t n() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t k() const { return static_cast<std::size_t>(vectors.cols()); }
};

struct PowerOptions {
  std::size_t k = 1;
  double tol = 1e-10;
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
};

/// Dominant k eigenpairs by power iteration with deflation.
///
/// Iterates on A + sI, where s is the largest absolute row sum of A, so the
/// algebraically largest eigenvalues dominate even when A is indefinite.
/// Converged vectors are projected out of every subsequent iterate. A pair is
/// accepted when successive normalized iterates differ by less than tol;
/// eigenvalues are Rayleigh quotients v^T A v. Throws ConvergenceError with the
/// last gap if max_iters is reached first.
EigenApproximation power_dominant(const SymmetricOperator& op, const PowerOptions& options);

struct SketchOptions {
  std::size_t k = 1;
  /// Take the SVD through the l x l Gram matrix C^T C instead of C itself.
  bool gram = false;
  /// Singular values at or below rank_rtol * sigma_max count as zero.
  double rank_rtol = 1e-12;
  std::size_t workers = 0;
};

/// Column-sampled SVD: the leading left singular vectors of C = A(:, J), with
/// eigenvalue estimates sqrt(n / l) * sigma_i.
///
/// For indefinite A these are estimates of |lambda|; signs are not recovered.
EigenApproximation sketch_svd(const SymmetricOperator& op, const SampleIndexSet& sample,
                              const SketchOptions& options);

struct NystromOptions {
  std::size_t k = 1;
  /// Eigenvalues of W with |d| <= pinv_rtol * max|d| are not inverted.
  double pinv_rtol = 1e-12;
  std::size_t workers = 0;
};

/// Nystrom extension from C = A(:, J) and W = A(J, J):
///   D_k = (n / l) D_W,   U_k = sqrt(l / n) C U_W D_W^+   (top k columns),
/// followed by per-column renormalization.
///
/// Throws DegenerateSampleError when no eigenvalue of W survives the cutoff.
EigenApproximation nystrom(const SymmetricOperator& op, const SampleIndexSet& sample,
                           const NystromOptions& options);

/// C = A(:, J), one column per sampled index, built in parallel.
Eigen::MatrixXd build_sketch(const SymmetricOperator& op, const SampleIndexSet& sample,
                             std::size_t workers = 0);

/// Flips each column so that its largest-magnitude entry is positive (lowest
/// index wins ties).
void fix_signs(Eigen::MatrixXd& vectors);

}  // namespace vortnet
