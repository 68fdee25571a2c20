#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vortnet/field.hpp"

namespace vortnet {

/// Symmetric n x n operator that can hand out single columns and products
/// without being stored.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;

  virtual std::size_t size() const = 0;
  virtual double entry(std::size_t i, std::size_t j) const = 0;
  /// out[i] = A(i, j). out.size() must equal size().
  virtual void column(std::size_t j, std::span<double> out) const = 0;
  /// y = A x.
  virtual void apply(std::span<const double> x, std::span<double> y) const;
};

/// Stored symmetric matrix; the caller guarantees symmetry.
class DenseSymmetricOperator final : public SymmetricOperator {
 public:
  explicit DenseSymmetricOperator(Eigen::MatrixXd matrix);

  std::size_t size() const override { return static_cast<std::size_t>(matrix_.rows()); }
  double entry(std::size_t i, std::size_t j) const override;
  void column(std::size_t j, std::span<double> out) const override;
  void apply(std::span<const double> x, std::span<double> y) const override;

  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

/// Implicit vortical-network adjacency:
///   A(i, j) = (|G_i| + |G_j|) / (4 pi d_ij) for i != j, A(i, i) = 0,
/// with G_i = omega_i dx dy. Nothing n x n is allocated unless materialize()
/// is called.
class AdjacencyOperator final : public SymmetricOperator {
 public:
  explicit AdjacencyOperator(VorticityField field, std::size_t workers = 0);

  const VorticityField& field() const { return field_; }
  std::size_t size() const override { return circulation_.size(); }
  std::span<const double> circulation() const { return circulation_; }

  double distance(std::size_t i, std::size_t j) const;

  /// Signed induced velocity G_i / (2 pi d_ij). Throws InvalidArgument for i == j.
  double induced_velocity(std::size_t i, std::size_t j) const;

  double entry(std::size_t i, std::size_t j) const override;
  void column(std::size_t j, std::span<double> out) const override;
  void apply(std::span<const double> x, std::span<double> y) const override;

  /// Dense copy. Throws CapacityExceededError when memory_estimate(n) > cap_bytes.
  Eigen::MatrixXd materialize(std::uint64_t cap_bytes) const;

  /// Row sums s_i = sum_j A(i, j), evaluated column by column.
  std::vector<double> node_strength() const;

  std::size_t workers() const { return workers_; }

 private:
  void check_index(std::size_t i) const;

  VorticityField field_;
  std::vector<double> circulation_;
  std::vector<double> abs_circulation_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::size_t workers_;
};

/// Bytes needed to store a dense n x n double matrix (n^2 * 8). Throws
/// InvalidArgument when the product does not fit in 64 bits or n == 0.
std::uint64_t memory_estimate(std::uint64_t n);

double bytes_to_gib(std::uint64_t bytes);

/// e.g. "74.29 GiB".
std::string format_gib(std::uint64_t bytes);

}  // namespace vortnet
