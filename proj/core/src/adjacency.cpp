#include "vortnet/adjacency.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "vortnet/error.hpp"
#include "vortnet/parallel.hpp"

namespace vortnet {
namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kRowBlock = 64;

}  // namespace

void SymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) throw InvalidArgument("apply: length mismatch");
  std::vector<double> col(n);
  for (std::size_t i = 0; i < n; ++i) {
    column(i, col);  // row i by symmetry
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += col[j] * x[j];
    y[i] = acc;
  }
}

DenseSymmetricOperator::DenseSymmetricOperator(Eigen::MatrixXd matrix)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw InvalidArgument("dense operator must be square and nonempty");
  }
}

double DenseSymmetricOperator::entry(std::size_t i, std::size_t j) const {
  return matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

void DenseSymmetricOperator::column(std::size_t j, std::span<double> out) const {
  if (j >= size() || out.size() != size()) throw InvalidArgument("column: bad index or length");
  Eigen::Map<Eigen::VectorXd>(out.data(), matrix_.rows()) = matrix_.col(static_cast<Eigen::Index>(j));
}

void DenseSymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != size() || y.size() != size()) throw InvalidArgument("apply: length mismatch");
  const auto n = matrix_.rows();
  Eigen::Map<Eigen::VectorXd>(y.data(), n).noalias() =
      matrix_ * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
}

AdjacencyOperator::AdjacencyOperator(VorticityField field, std::size_t workers)
    : field_(std::move(field)), workers_(workers == 0 ? default_workers() : workers) {
  const GridSpec& g = field_.grid();
  const double area = g.dx * g.dy;
  const std::size_t n = field_.size();
  circulation_.resize(n);
  abs_circulation_.resize(n);
  x_.resize(n);
  y_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    circulation_[i] = field_[i] * area;
    abs_circulation_[i] = std::abs(circulation_[i]);
    x_[i] = g.x(i);
    y_[i] = g.y(i);
  }
}

void AdjacencyOperator::check_index(std::size_t i) const {
  if (i >= size()) {
    throw InvalidArgument("node index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(size()) + ")");
  }
}

double AdjacencyOperator::distance(std::size_t i, std::size_t j) const {
  check_index(i);
  check_index(j);
  const double ddx = x_[i] - x_[j];
  const double ddy = y_[i] - y_[j];
  return std::sqrt(ddx * ddx + ddy * ddy);
}

double AdjacencyOperator::induced_velocity(std::size_t i, std::size_t j) const {
  if (i == j) throw InvalidArgument("induced velocity of a node on itself is undefined");
  return circulation_[i] / (kTwoPi * distance(i, j));
}

double AdjacencyOperator::entry(std::size_t i, std::size_t j) const {
  if (i == j) {
    check_index(i);
    return 0.0;
  }
  return (abs_circulation_[i] + abs_circulation_[j]) / (kFourPi * distance(i, j));
}

void AdjacencyOperator::column(std::size_t j, std::span<double> out) const {
  check_index(j);
  const std::size_t n = size();
  if (out.size() != n) throw InvalidArgument("column: output length must equal n");
  const double gj = abs_circulation_[j];
  const double xj = x_[j];
  const double yj = y_[j];
  for (std::size_t i = 0; i < n; ++i) {
    const double ddx = x_[i] - xj;
    const double ddy = y_[i] - yj;
    out[i] = (abs_circulation_[i] + gj) / (kFourPi * std::sqrt(ddx * ddx + ddy * ddy));
  }
  out[j] = 0.0;
}

void AdjacencyOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) throw InvalidArgument("apply: length mismatch");
  const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
  parallel_for(blocks, workers_, [&](std::size_t b) {
    std::vector<double> row(n);
    const std::size_t end = std::min(n, (b + 1) * kRowBlock);
    for (std::size_t i = b * kRowBlock; i < end; ++i) {
      column(i, row);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
  });
}

Eigen::MatrixXd AdjacencyOperator::materialize(std::uint64_t cap_bytes) const {
  const std::uint64_t need = memory_estimate(size());
  if (need > cap_bytes) {
    throw CapacityExceededError("dense adjacency needs " + format_gib(need) +
                                    ", cap is " + format_gib(cap_bytes),
                                need, cap_bytes);
  }
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd dense(n, n);
  parallel_for(size(), workers_, [&](std::size_t j) {
    column(j, std::span<double>(dense.col(static_cast<Eigen::Index>(j)).data(), size()));
  });
  return dense;
}

std::vector<double> AdjacencyOperator::node_strength() const {
  const std::size_t n = size();
  std::vector<double> strength(n);
  const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
  parallel_for(blocks, workers_, [&](std::size_t b) {
    std::vector<double> col(n);
    const std::size_t end = std::min(n, (b + 1) * kRowBlock);
    for (std::size_t j = b * kRowBlock; j < end; ++j) {
      column(j, col);
      double acc = 0.0;
      for (double v : col) acc += v;
      strength[j] = acc;
    }
  });
  return strength;
}

std::uint64_t memory_estimate(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("memory_estimate: n must be positive");
  const unsigned __int128 bytes = static_cast<unsigned __int128>(n) * n * 8u;
  if (bytes > UINT64_MAX) throw InvalidArgument("memory_estimate: n^2 * 8 overflows 64 bits");
  return static_cast<std::uint64_t>(bytes);
}

double bytes_to_gib(std::uint64_t bytes) {
  return static_cast<double>(bytes) / (1024.0 * 1024.0 * 1024.0);
}

std::string format_gib(std::uint64_t bytes) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f GiB", bytes_to_gib(bytes));
  return buf;
}

}  // namespace vortnet
