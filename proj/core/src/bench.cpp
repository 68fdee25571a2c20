#include "vortnet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "vortnet/analysis.hpp"
#include "vortnet/error.hpp"
#include "vortnet/format.hpp"
#include "vortnet/parallel.hpp"

namespace vortnet {
namespace {

struct TrialKey {
  Method method;
  std::optional<SamplerKind> sampler;
  double fraction;
  std::size_t trial;
};

std::vector<TrialKey> enumerate_trials(const SweepConfig& config) {
  std::vector<TrialKey> keys;
  for (Method method : config.methods) {
    if (method == Method::power) {
      for (std::size_t t = 0; t < config.trials; ++t) keys.push_back({method, std::nullopt, 1.0, t});
      continue;
    }
    for (SamplerKind sampler : config.samplers) {
      for (double fraction : config.fractions) {
        for (std::size_t t = 0; t < config.trials; ++t) keys.push_back({method, sampler, fraction, t});
      }
    }
  }
  return keys;
}

std::string optional_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

constexpr const char* kRecordHeader =
    "field_id,n,method,sampler,fraction,l,seed,k,angle_error_deg,wall_time_s,sketch_s,"
    "decompose_s,reconstruct_s";

}  // namespace

std::size_t sample_count(double fraction, std::size_t n, std::size_t k) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InvalidArgument("sampling fraction must lie in (0, 1], got " + format_double(fraction));
  }
  if (k > n) throw InvalidArgument("k exceeds n");
  const auto l = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp(l, std::max<std::size_t>(k, 1), n);
}

EigenApproximation run_randomized(const SymmetricOperator& op, const GridSpec& grid,
                                  Method method, SamplerKind sampler, std::size_t l,
                                  std::uint64_t seed, std::size_t k, bool gram,
                                  double pinv_rtol, std::size_t workers) {
  const auto start = std::chrono::steady_clock::now();
  const SampleIndexSet sample = draw_sample(sampler, grid, l, seed);
  const double draw_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EigenApproximation approx;
  switch (method) {
    case Method::sketch_svd:
      approx = sketch_svd(op, sample, {.k = k, .gram = gram, .workers = workers});
      break;
    case Method::nystrom:
      approx = nystrom(op, sample, {.k = k, .pinv_rtol = pinv_rtol, .workers = workers});
      break;
    case Method::power:
      throw InvalidArgument("run_randomized: power is not a sampled method");
  }
  approx.times.sketch += draw_s;
  return approx;
}

SweepResult run_sweep(const VorticityField& field, const SweepConfig& config) {
  if (config.trials == 0) throw InvalidArgument("sweep needs at least one trial");
  if (config.methods.empty()) throw InvalidArgument("sweep needs at least one method");
  const std::size_t n = field.size();
  for (double f : config.fractions) sample_count(f, n, config.k);

  const std::size_t workers = config.workers == 0 ? default_workers() : config.workers;
  const AdjacencyOperator implicit(field, workers);

  std::unique_ptr<SymmetricOperator> dense;
  if (memory_estimate(n) <= config.materialize_cap_bytes) {
    dense = std::make_unique<DenseSymmetricOperator>(implicit.materialize(config.materialize_cap_bytes));
  }
  const SymmetricOperator& baseline_op = dense ? *dense : static_cast<const SymmetricOperator&>(implicit);

  SweepResult result;
  PowerOptions baseline_options = config.baseline;
  baseline_options.k = std::max<std::size_t>(baseline_options.k, 1);
  result.baseline = power_dominant(baseline_op, baseline_options);
  const Eigen::VectorXd truth = result.baseline.vectors.col(0);

  const auto keys = enumerate_trials(config);
  result.records.resize(keys.size());
  // Columns are generated from the implicit operator; trials run concurrently
  // and each one stays single-threaded.
  const AdjacencyOperator columns(field, 1);
  parallel_for(keys.size(), workers, [&](std::size_t idx) {
    const TrialKey& key = keys[idx];
    BenchmarkRecord& rec = result.records[idx];
    rec.field_id = config.field_id;
    rec.n = n;
    rec.method = key.method;
    rec.sampler = key.sampler;
    rec.fraction = key.fraction;
    rec.seed = config.base_seed + key.trial;
    rec.k = config.k;
    if (key.method == Method::power) {
      PowerOptions options = config.baseline;
      options.k = config.k;
      options.seed = rec.seed;
      const auto approx = power_dominant(baseline_op, options);
      rec.l = n;
      rec.phases = approx.times;
      rec.wall_time_s = approx.times.total();
      return;
    }
    rec.l = sample_count(key.fraction, n, config.k);
    const auto approx = run_randomized(columns, field.grid(), key.method, *key.sampler, rec.l,
                                       rec.seed, config.k, config.gram, config.pinv_rtol, 1);
    rec.angle_error_deg = angle_error_deg(Eigen::VectorXd(approx.vectors.col(0)), truth);
    rec.phases = approx.times;
    rec.wall_time_s = approx.times.total();
  });
  return result;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("percentile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("percentile rank must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Quartiles quartiles(std::vector<double> values) {
  Quartiles q;
  q.p25 = percentile(values, 0.25);
  q.median = percentile(values, 0.5);
  q.p75 = percentile(values, 0.75);
  double sum = 0.0;
  for (double v : values) sum += v;
  q.mean = sum / static_cast<double>(values.size());
  return q;
}

std::vector<SummaryRow> summarize(std::span<const BenchmarkRecord> records) {
  if (records.empty()) throw InvalidArgument("summarize needs at least one record");
  struct Group {
    SummaryRow row;
    std::vector<double> errors;
    std::vector<double> times;
  };
  std::vector<Group> groups;
  for (const auto& rec : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.row.method == rec.method && g.row.sampler == rec.sampler &&
             g.row.fraction == rec.fraction;
    });
    if (it == groups.end()) {
      Group g;
      g.row.method = rec.method;
      g.row.sampler = rec.sampler;
      g.row.fraction = rec.fraction;
      g.row.l = rec.l;
      groups.push_back(std::move(g));
      it = std::prev(groups.end());
    }
    if (rec.angle_error_deg) it->errors.push_back(*rec.angle_error_deg);
    it->times.push_back(rec.wall_time_s);
  }
  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (auto& g : groups) {
    g.row.trials = g.times.size();
    if (!g.errors.empty()) g.row.error_deg = quartiles(g.errors);
    g.row.wall_time_s = quartiles(g.times);
    rows.push_back(g.row);
  }
  return rows;
}

void write_records_csv(std::ostream& out, std::span<const BenchmarkRecord> records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.field_id << ',' << r.n << ',' << to_string(r.method) << ','
        << (r.sampler ? to_string(*r.sampler) : "none") << ',' << format_double(r.fraction) << ','
        << r.l << ',' << r.seed << ',' << r.k << ',' << optional_cell(r.angle_error_deg) << ','
        << format_double(r.wall_time_s) << ',' << format_double(r.phases.sketch) << ','
        << format_double(r.phases.decompose) << ',' << format_double(r.phases.reconstruct)
        << '\n';
  }
}

std::vector<BenchmarkRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw FormatError("records CSV header mismatch");
  }
  std::vector<BenchmarkRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_cells(line);
    if (c.size() != 13) throw FormatError("records CSV row needs 13 cells: " + line);
    try {
      BenchmarkRecord r;
      r.field_id = c[0];
      r.n = std::stoull(c[1]);
      r.method = parse_method(c[2]);
      if (c[3] != "none") r.sampler = parse_sampler(c[3]);
      r.fraction = std::stod(c[4]);
      r.l = std::stoull(c[5]);
      r.seed = std::stoull(c[6]);
      r.k = std::stoull(c[7]);
      if (!c[8].empty()) r.angle_error_deg = std::stod(c[8]);
      r.wall_time_s = std::stod(c[9]);
      r.phases = {std::stod(c[10]), std::stod(c[11]), std::stod(c[12])};
      records.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw FormatError("unparseable records CSV row: " + line);
    }
  }
  return records;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "method,sampler,fraction,l,trials,error_p25,error_median,error_p75,error_mean,"
         "time_p25,time_median,time_p75,time_mean\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << (r.sampler ? to_string(*r.sampler) : "none") << ','
        << format_double(r.fraction) << ',' << r.l << ',' << r.trials << ',';
    if (r.error_deg) {
      out << format_double(r.error_deg->p25) << ',' << format_double(r.error_deg->median) << ','
          << format_double(r.error_deg->p75) << ',' << format_double(r.error_deg->mean) << ',';
    } else {
      out << ",,,,";
    }
    out << format_double(r.wall_time_s.p25) << ',' << format_double(r.wall_time_s.median) << ','
        << format_double(r.wall_time_s.p75) << ',' << format_double(r.wall_time_s.mean) << '\n';
  }
}

}  // namespace vortnet
