#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vortnet/eigensolvers.hpp"

namespace vortnet {

/// Acute angle between two nonzero vectors, arccos(|v.w| / (|v| |w|)), in
/// radians. Throws InvalidArgument on a zero vector or length mismatch.
double angle_error_rad(std::span<const double> v, std::span<const double> w);
double angle_error_deg(std::span<const double> v, std::span<const double> w);

double angle_error_deg(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

inline double rad_to_deg(double rad) { return rad * 57.295779513082320876798154814105; }

/// |u_1| entrywise: influence read off the leading eigenvector.
std::vector<double> eigenvector_centrality(const EigenApproximation& approx);

struct ClusterAssignment {
  std::vector<int> labels;
  std::size_t clusters = 0;
  /// clusters x dims, in eigenvector-coordinate space.
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  /// Inertia after each assignment step (k-means only).
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
  /// Number of times an emptied cluster was reseeded at the farthest point.
  std::size_t repairs = 0;
};

/// Labels each node by the sign pattern of its first `depth` eigenvector
/// entries (zero counts as nonnegative). Codes are compacted to 0..c-1 in
/// ascending code order.
ClusterAssignment sign_partition(const Eigen::MatrixXd& vectors, std::size_t depth);
ClusterAssignment sign_partition(const EigenApproximation& approx, std::size_t depth);

struct KMeansOptions {
  std::size_t clusters = 2;
  std::uint64_t seed = 0;
  std::size_t max_iters = 300;
  /// Stop once no centroid moves farther than this.
  double tol = 1e-10;
  /// Independent k-means++ starts (seeds seed, seed + 1, ...); the lowest
  /// final inertia wins.
  std::size_t restarts = 1;
};

/// Lloyd's k-means on the rows of `points` with k-means++ seeding. Distance
/// ties go to the lowest centroid index.
ClusterAssignment kmeans_cluster(const Eigen::MatrixXd& points, const KMeansOptions& options);

/// k-means on the first use_k eigenvector columns.
ClusterAssignment kmeans_cluster(const EigenApproximation& approx, std::size_t use_k,
                                 const KMeansOptions& options);

/// Fraction of nodes whose labels agree after the best one-to-one matching of
/// label ids (Hungarian algorithm on the contingency table).
double label_agreement(std::span<const int> a, std::span<const int> b);

/// Minimum-cost assignment on a square cost matrix; result[row] = column.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace vortnet
