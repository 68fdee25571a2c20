#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vortnet/analysis.hpp"
#include "vortnet/eigensolvers.hpp"
#include "vortnet/format.hpp"

namespace vortnet {

/// "node,u1,...,uk" followed by one row per node.
void write_vectors_csv(std::ostream& out, const Eigen::MatrixXd& vectors);
Eigen::MatrixXd read_vectors_csv(std::istream& in);

/// Extra run context recorded next to the numbers.
struct RunInfo {
  std::string field;
  std::optional<double> fraction;
  std::uint64_t seed = 0;
};

/// JSON sidecar: method, sampler, seed, n, l, k, eigenvalues, phase timings,
/// pre-normalization norms and flags.
std::string metadata_json(const EigenApproximation& approx, const RunInfo& info);

/// "node,label".
void write_labels_csv(std::ostream& out, std::span<const int> labels);
std::vector<int> read_labels_csv(std::istream& in);

/// "node,s1,...,sd": eigenvector coordinates used for clustering.
void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace vortnet
