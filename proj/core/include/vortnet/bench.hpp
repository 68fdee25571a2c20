#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vortnet/adjacency.hpp"
#include "vortnet/eigensolvers.hpp"
#include "vortnet/field.hpp"
#include "vortnet/sampling.hpp"

namespace vortnet {

/// One (method, sampler, fraction, seed) trial.
struct BenchmarkRecord {
  std::string field_id;
  std::size_t n = 0;
  Method method = Method::nystrom;
  std::optional<SamplerKind> sampler;  // empty for the power baseline
  double fraction = 1.0;
  std::size_t l = 0;
  std::uint64_t seed = 0;
  std::size_t k = 1;
  std::optional<double> angle_error_deg;  // empty for the power baseline
  double wall_time_s = 0.0;
  PhaseTimes phases;
};

struct SweepConfig {
  std::string field_id = "field";
  std::size_t k = 1;
  std::vector<double> fractions{0.01, 0.02, 0.05, 0.10, 0.20};
  std::vector<SamplerKind> samplers{SamplerKind::uniform, SamplerKind::halton};
  std::vector<Method> methods{Method::sketch_svd, Method::nystrom};
  std::size_t trials = 20;
  std::uint64_t base_seed = 0;
  /// Concurrent trials; 0 means default_workers().
  std::size_t workers = 0;
  /// Largest dense baseline matrix; beyond it the baseline runs matrix-free.
  std::uint64_t materialize_cap_bytes = std::uint64_t{2} << 30;
  PowerOptions baseline{};
  bool gram = false;
  double pinv_rtol = 1e-12;
};

struct SweepResult {
  EigenApproximation baseline;
  std::vector<BenchmarkRecord> records;
};

/// l = round(fraction * n), clamped to [k, n]. Throws unless fraction is in (0, 1].
std::size_t sample_count(double fraction, std::size_t n, std::size_t k);

/// One randomized approximation: draws the sample and dispatches to
/// sketch_svd or nystrom.
EigenApproximation run_randomized(const SymmetricOperator& op, const GridSpec& grid,
                                  Method method, SamplerKind sampler, std::size_t l,
                                  std::uint64_t seed, std::size_t k, bool gram,
                                  double pinv_rtol, std::size_t workers);

/// Computes the power baseline once, then one record per
/// (method, sampler, fraction, trial) with seed = base_seed + trial, ordered by
/// that key regardless of which worker finished first. A power entry in
/// `methods` yields one record per trial with no sampler and no angle error.
/// Baseline failure propagates as ConvergenceError.
SweepResult run_sweep(const VorticityField& field, const SweepConfig& config);

struct Quartiles {
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double mean = 0.0;
};

/// Linear interpolation between closest ranks (q in [0, 1]).
double percentile(std::vector<double> values, double q);
Quartiles quartiles(std::vector<double> values);

struct SummaryRow {
  Method method = Method::nystrom;
  std::optional<SamplerKind> sampler;
  double fraction = 1.0;
  std::size_t l = 0;
  std::size_t trials = 0;
  std::optional<Quartiles> error_deg;
  Quartiles wall_time_s;
};

/// Groups by (method, sampler, fraction) in first-seen order.
std::vector<SummaryRow> summarize(std::span<const BenchmarkRecord> records);

/// Column order:
/// field_id,n,method,sampler,fraction,l,seed,k,angle_error_deg,wall_time_s,sketch_s,decompose_s,reconstruct_s
void write_records_csv(std::ostream& out, std::span<const BenchmarkRecord> records);
std::vector<BenchmarkRecord> read_records_csv(std::istream& in);

/// Column order:
/// method,sampler,fraction,l,trials,error_p25,error_median,error_p75,error_mean,time_p25,time_median,time_p75,time_mean
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace vortnet
