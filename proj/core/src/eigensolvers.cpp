#include "vortnet/eigensolvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "vortnet/error.hpp"
#include "vortnet/parallel.hpp"

namespace vortnet {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_sample(const SymmetricOperator& op, const SampleIndexSet& sample, std::size_t k) {
  if (sample.n != op.size()) {
    throw InvalidArgument("sample drawn for n = " + std::to_string(sample.n) +
                          " but operator has n = " + std::to_string(op.size()));
  }
  if (sample.size() == 0) throw InvalidArgument("empty sample");
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (k > sample.size()) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds sample size l = " +
                          std::to_string(sample.size()));
  }
  for (std::size_t j : sample.indices) {
    if (j >= op.size()) throw InvalidArgument("sample index out of range");
  }
}

/// Largest absolute row sum; bounds the spectral radius.
double gershgorin_bound(const SymmetricOperator& op) {
  const std::size_t n = op.size();
  std::vector<double> col(n);
  double bound = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    op.column(j, col);
    double sum = 0.0;
    for (double v : col) sum += std::abs(v);
    bound = std::max(bound, sum);
  }
  return bound;
}

void project_out(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index count) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < count; ++c) v -= basis.col(c).dot(v) * basis.col(c);
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::power: return "power";
    case Method::sketch_svd: return "sketch_svd";
    case Method::nystrom: return "nystrom";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "power") return Method::power;
  if (name == "sketch_svd" || name == "sketch") return Method::sketch_svd;
  if (name == "nystrom") return Method::nystrom;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (vectors.rows() > 0 && vectors(best, c) < 0) vectors.col(c) *= -1.0;
  }
}

Eigen::MatrixXd build_sketch(const SymmetricOperator& op, const SampleIndexSet& sample,
                             std::size_t workers) {
  const std::size_t n = op.size();
  const std::size_t l = sample.size();
  Eigen::MatrixXd sketch(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(l));
  parallel_for(l, workers == 0 ? default_workers() : workers, [&](std::size_t t) {
    op.column(sample.indices[t],
              std::span<double>(sketch.col(static_cast<Eigen::Index>(t)).data(), n));
  });
  return sketch;
}

EigenApproximation power_dominant(const SymmetricOperator& op, const PowerOptions& options) {
  const std::size_t n = op.size();
  if (options.k == 0 || options.k > n) throw InvalidArgument("power: need 1 <= k <= n");
  if (!(options.tol > 0)) throw InvalidArgument("power: tol must be positive");
  if (options.max_iters == 0) throw InvalidArgument("power: max_iters must be positive");

  const auto start = Clock::now();
  const auto nn = static_cast<Eigen::Index>(n);
  const auto kk = static_cast<Eigen::Index>(options.k);
  const double shift = gershgorin_bound(op);

  EigenApproximation result;
  result.method = Method::power;
  result.vectors.resize(nn, kk);
  result.values.resize(kk);
  result.raw_norms = Eigen::VectorXd::Ones(kk);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(nn), w(nn);

  for (Eigen::Index p = 0; p < kk; ++p) {
    for (Eigen::Index i = 0; i < nn; ++i) v(i) = normal(rng);
    project_out(v, result.vectors, p);
    if (v.norm() == 0.0) throw Error("power: start vector collapsed under deflation");
    v.normalize();

    double gap = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    bool converged = false;
    while (iter < options.max_iters) {
      ++iter;
      op.apply(std::span<const double>(v.data(), n), std::span<double>(w.data(), n));
      w += shift * v;
      project_out(w, result.vectors, p);
      const double norm = w.norm();
      if (norm == 0.0) {
        // v lies in the null space of the shifted, deflated operator.
        gap = 0.0;
        converged = true;
        break;
      }
      w /= norm;
      if (w.dot(v) < 0) w = -w;
      gap = (w - v).norm();
      v.swap(w);
      if (gap < options.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("power iteration for pair " + std::to_string(p) +
                                 " did not converge in " + std::to_string(iter) +
                                 " iterations (last gap " + std::to_string(gap) + ")",
                             static_cast<std::size_t>(p), iter, gap);
    }
    op.apply(std::span<const double>(v.data(), n), std::span<double>(w.data(), n));
    result.values(p) = v.dot(w);
    result.vectors.col(p) = v;
    result.iterations.push_back(iter);
    result.residuals.push_back(gap);
  }

  fix_signs(result.vectors);
  result.times.decompose = seconds_since(start);
  return result;
}

EigenApproximation sketch_svd(const SymmetricOperator& op, const SampleIndexSet& sample,
                              const SketchOptions& options) {
  check_sample(op, sample, options.k);
  const std::size_t n = op.size();
  const std::size_t l = sample.size();

  EigenApproximation result;
  result.method = Method::sketch_svd;
  result.sample = sample;

  auto t0 = Clock::now();
  const Eigen::MatrixXd sketch = build_sketch(op, sample, options.workers);
  result.times.sketch = seconds_since(t0);

  t0 = Clock::now();
  Eigen::VectorXd sigma;
  Eigen::MatrixXd left;        // non-Gram route: thin U of C
  Eigen::MatrixXd right;       // Gram route: eigenvectors of C^T C, descending
  if (options.gram) {
    Eigen::MatrixXd gram(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
    gram.noalias() = sketch.transpose() * sketch;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw Error("sketch_svd: Gram eigensolver failed");
    sigma = solver.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
    right = solver.eigenvectors().rowwise().reverse();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sketch, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success) throw Error("sketch_svd: SVD failed");
    sigma = svd.singularValues();
    left = svd.matrixU();
  }
  result.times.decompose = seconds_since(t0);

  t0 = Clock::now();
  const double cutoff = options.rank_rtol * (sigma.size() ? sigma(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < static_cast<Eigen::Index>(options.k) && rank < sigma.size() &&
         sigma(rank) > cutoff) {
    ++rank;
  }
  if (rank == 0) throw DegenerateSampleError("sketch_svd: sampled columns are all zero");
  result.rank_deficient = rank < static_cast<Eigen::Index>(options.k);

  const auto nn = static_cast<Eigen::Index>(n);
  if (options.gram) {
    result.vectors.resize(nn, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
      result.vectors.col(c).noalias() = sketch * right.col(c);
      result.vectors.col(c) /= sigma(c);
      result.vectors.col(c).normalize();
    }
  } else {
    result.vectors = left.leftCols(rank);
  }
  result.values = std::sqrt(static_cast<double>(n) / static_cast<double>(l)) * sigma.head(rank);
  result.raw_norms = Eigen::VectorXd::Ones(rank);
  fix_signs(result.vectors);
  result.times.reconstruct = seconds_since(t0);
  return result;
}

EigenApproximation nystrom(const SymmetricOperator& op, const SampleIndexSet& sample,
                           const NystromOptions& options) {
  check_sample(op, sample, options.k);
  if (!(options.pinv_rtol >= 0)) throw InvalidArgument("nystrom: pinv_rtol must be >= 0");
  const std::size_t n = op.size();
  const std::size_t l = sample.size();
  const auto ll = static_cast<Eigen::Index>(l);

  EigenApproximation result;
  result.method = Method::nystrom;
  result.sample = sample;

  auto t0 = Clock::now();
  const Eigen::MatrixXd sketch = build_sketch(op, sample, options.workers);
  Eigen::MatrixXd block(ll, ll);
  for (Eigen::Index a = 0; a < ll; ++a) {
    block.row(a) = sketch.row(static_cast<Eigen::Index>(sample.indices[a]));
  }
  result.times.sketch = seconds_since(t0);

  t0 = Clock::now();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
  if (solver.info() != Eigen::Success) throw Error("nystrom: eigensolver failed on W");
  const Eigen::VectorXd d = solver.eigenvalues().reverse();
  const Eigen::MatrixXd basis = solver.eigenvectors().rowwise().reverse();
  result.times.decompose = seconds_since(t0);

  t0 = Clock::now();
  const double cutoff = options.pinv_rtol * d.cwiseAbs().maxCoeff();
  if (!(d.cwiseAbs().maxCoeff() > 0)) {
    throw DegenerateSampleError("nystrom: W is identically zero; resample");
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(options.k); ++c) {
    if (std::abs(d(c)) > cutoff) kept.push_back(c);
  }
  if (kept.empty()) {
    throw DegenerateSampleError("nystrom: leading eigenvalues of W are below the "
                                "pseudo-inverse cutoff; resample");
  }
  result.rank_deficient = kept.size() < options.k;

  const auto nn = static_cast<Eigen::Index>(n);
  const auto kk = static_cast<Eigen::Index>(kept.size());
  const double ratio = static_cast<double>(n) / static_cast<double>(l);
  const double lift = std::sqrt(1.0 / ratio);
  Eigen::MatrixXd coeffs(ll, kk);
  result.values.resize(kk);
  for (Eigen::Index c = 0; c < kk; ++c) {
    coeffs.col(c) = basis.col(kept[c]) * (lift / d(kept[c]));
    result.values(c) = ratio * d(kept[c]);
  }
  result.vectors.resize(nn, kk);
  result.vectors.noalias() = sketch * coeffs;
  result.raw_norms = result.vectors.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < kk; ++c) {
    if (!(result.raw_norms(c) > 0)) {
      throw DegenerateSampleError("nystrom: reconstructed eigenvector vanished; resample");
    }
    result.vectors.col(c) /= result.raw_norms(c);
  }
  fix_signs(result.vectors);
  result.times.reconstruct = seconds_since(t0);
  return result;
}

}  // namespace vortnet
