#include "vortnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "vortnet/error.hpp"

namespace vortnet {
namespace {

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index row,
                        const Eigen::MatrixXd& centroids, Eigen::Index c) {
  return (points.row(row) - centroids.row(c)).squaredNorm();
}

Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& points, std::size_t clusters,
                                 std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  const auto cc = static_cast<Eigen::Index>(clusters);
  Eigen::MatrixXd centroids(cc, points.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centroids.row(0) = points.row(first(rng));

  std::vector<double> nearest(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) nearest[i] = squared_distance(points, i, centroids, 0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index c = 1; c < cc; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;
    Eigen::Index pick = n - 1;
    if (total > 0) {
      const double target = unit(rng) * total;
      double running = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        running += nearest[i];
        if (running > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centroids.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points, i, centroids, c));
    }
  }
  return centroids;
}

double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
              std::vector<int>& labels, std::vector<double>& cost) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = squared_distance(points, i, centroids, 0);
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double d = squared_distance(points, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    cost[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

ClusterAssignment kmeans_once(const Eigen::MatrixXd& points, const KMeansOptions& options,
                              std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  const auto cc = static_cast<Eigen::Index>(options.clusters);
  std::mt19937_64 rng(seed);

  ClusterAssignment result;
  result.clusters = options.clusters;
  result.centroids = kmeans_plus_plus(points, options.clusters, rng);
  result.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> cost(static_cast<std::size_t>(n));

  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    result.inertia_history.push_back(assign(points, result.centroids, result.labels, cost));
    result.iterations = iter + 1;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(cc, points.cols());
    std::vector<std::size_t> counts(options.clusters, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(result.labels[i]) += points.row(i);
      ++counts[result.labels[i]];
    }
    for (Eigen::Index c = 0; c < cc; ++c) {
      if (counts[c] > 0) continue;
      // Repair: move the point worst served by its centroid into the empty cluster.
      Eigen::Index far = 0;
      for (Eigen::Index i = 1; i < n; ++i) {
        if (cost[i] > cost[far] && counts[result.labels[i]] > 1) far = i;
      }
      const int from = result.labels[far];
      sums.row(from) -= points.row(far);
      --counts[from];
      sums.row(c) = points.row(far);
      counts[c] = 1;
      result.labels[far] = static_cast<int>(c);
      cost[far] = 0.0;
      ++result.repairs;
    }
    double shift = 0.0;
    for (Eigen::Index c = 0; c < cc; ++c) {
      const Eigen::RowVectorXd updated = sums.row(c) / static_cast<double>(counts[c]);
      shift = std::max(shift, (updated - result.centroids.row(c)).norm());
      result.centroids.row(c) = updated;
    }
    if (shift < options.tol) break;
  }
  result.inertia = assign(points, result.centroids, result.labels, cost);
  return result;
}

}  // namespace

double angle_error_rad(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) throw InvalidArgument("angle_error: length mismatch");
  double dot = 0.0, vv = 0.0, ww = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dot += v[i] * w[i];
    vv += v[i] * v[i];
    ww += w[i] * w[i];
  }
  if (!(vv > 0) || !(ww > 0)) throw InvalidArgument("angle_error: zero vector");
  // 2 atan2(|a - b|, |a + b|) on the unit vectors, with b's sign aligned to a.
  // Unlike acos of the cosine it stays accurate for nearly parallel vectors.
  const double sv = 1.0 / std::sqrt(vv);
  const double sw = (dot < 0 ? -1.0 : 1.0) / std::sqrt(ww);
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = v[i] * sv, b = w[i] * sw;
    diff += (a - b) * (a - b);
    sum += (a + b) * (a + b);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

double angle_error_deg(std::span<const double> v, std::span<const double> w) {
  return rad_to_deg(angle_error_rad(v, w));
}

double angle_error_deg(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return angle_error_deg(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
                         std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
}

std::vector<double> eigenvector_centrality(const EigenApproximation& approx) {
  if (approx.k() == 0) throw InvalidArgument("centrality needs at least one eigenvector");
  std::vector<double> centrality(approx.n());
  for (std::size_t i = 0; i < centrality.size(); ++i) {
    centrality[i] = std::abs(approx.vectors(static_cast<Eigen::Index>(i), 0));
  }
  return centrality;
}

ClusterAssignment sign_partition(const Eigen::MatrixXd& vectors, std::size_t depth) {
  if (depth == 0 || depth > static_cast<std::size_t>(vectors.cols())) {
    throw InvalidArgument("sign_partition: depth must be in [1, k]");
  }
  if (depth > 30) throw InvalidArgument("sign_partition: depth above 30 is not supported");
  const Eigen::Index n = vectors.rows();
  const auto dd = static_cast<Eigen::Index>(depth);
  std::vector<unsigned> codes(static_cast<std::size_t>(n));
  std::map<unsigned, int> compact;
  for (Eigen::Index i = 0; i < n; ++i) {
    unsigned code = 0;
    for (Eigen::Index b = 0; b < dd; ++b) {
      if (vectors(i, b) < 0) code |= 1u << b;
    }
    codes[i] = code;
    compact.emplace(code, 0);
  }
  int next = 0;
  for (auto& [code, label] : compact) label = next++;

  ClusterAssignment result;
  result.clusters = compact.size();
  result.labels.resize(static_cast<std::size_t>(n));
  result.centroids = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(result.clusters), dd);
  std::vector<std::size_t> counts(result.clusters, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = compact.at(codes[i]);
    result.labels[i] = label;
    result.centroids.row(label) += vectors.row(i).head(dd);
    ++counts[label];
  }
  for (std::size_t c = 0; c < result.clusters; ++c) {
    result.centroids.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    result.inertia +=
        (vectors.row(i).head(dd) - result.centroids.row(result.labels[i])).squaredNorm();
  }
  return result;
}

ClusterAssignment sign_partition(const EigenApproximation& approx, std::size_t depth) {
  return sign_partition(approx.vectors, depth);
}

ClusterAssignment kmeans_cluster(const Eigen::MatrixXd& points, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (options.clusters == 0) throw InvalidArgument("kmeans: cluster count must be >= 1");
  if (options.clusters > n) {
    throw InvalidArgument("kmeans: cluster count " + std::to_string(options.clusters) +
                          " exceeds point count " + std::to_string(n));
  }
  if (points.cols() == 0) throw InvalidArgument("kmeans: points need at least one coordinate");
  if (options.max_iters == 0) throw InvalidArgument("kmeans: max_iters must be positive");
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  ClusterAssignment best;
  for (std::size_t r = 0; r < restarts; ++r) {
    ClusterAssignment run = kmeans_once(points, options, options.seed + r);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

ClusterAssignment kmeans_cluster(const EigenApproximation& approx, std::size_t use_k,
                                 const KMeansOptions& options) {
  if (use_k == 0 || use_k > approx.k()) {
    throw InvalidArgument("kmeans: use_k = " + std::to_string(use_k) +
                          " but only " + std::to_string(approx.k()) + " eigenvectors exist");
  }
  return kmeans_cluster(Eigen::MatrixXd(approx.vectors.leftCols(static_cast<Eigen::Index>(use_k))),
                        options);
}

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
  // Shortest augmenting path with row/column potentials, O(m^3).
  if (cost.rows() != cost.cols()) throw InvalidArgument("assignment needs a square cost matrix");
  const auto m = static_cast<std::size_t>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t row = 1; row <= m; ++row) {
    owner[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[col0] = true;
      const std::size_t r0 = owner[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= m; ++col) {
        if (used[col]) continue;
        const double reduced = cost(static_cast<Eigen::Index>(r0 - 1),
                                    static_cast<Eigen::Index>(col - 1)) - u[r0] - v[col];
        if (reduced < minv[col]) {
          minv[col] = reduced;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= m; ++col) {
        if (used[col]) {
          u[owner[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> match(m);
  for (std::size_t col = 1; col <= m; ++col) match[owner[col] - 1] = col - 1;
  return match;
}

double label_agreement(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw InvalidArgument("label_agreement: length mismatch");
  if (a.empty()) throw InvalidArgument("label_agreement: empty labelings");
  int max_label = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) throw InvalidArgument("label_agreement: negative label");
    max_label = std::max({max_label, a[i], b[i]});
  }
  const Eigen::Index m = max_label + 1;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < a.size(); ++i) cost(a[i], b[i]) -= 1.0;
  const auto match = solve_assignment(cost);
  double matched = 0.0;
  for (std::size_t row = 0; row < match.size(); ++row) {
    matched -= cost(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(match[row]));
  }
  return matched / static_cast<double>(a.size());
}

}  // namespace vortnet
