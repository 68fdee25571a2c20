#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "vortnet/vortnet.hpp"

namespace vortnet::cli {
namespace {

/// Arguments that passed CLI11 but violate a contract checked later.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t gib_to_bytes(double gib) {
  return static_cast<std::uint64_t>(gib * 1024.0 * 1024.0 * 1024.0);
}

std::string csv_text(const Eigen::MatrixXd& vectors) {
  std::ostringstream out;
  write_vectors_csv(out, vectors);
  return out.str();
}

Eigen::MatrixXd load_vectors(const std::string& path) {
  std::istringstream in(read_text_file(path));
  return read_vectors_csv(in);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string preset = "vortices";
  std::size_t nx = 64;
  std::size_t ny = 64;
  std::optional<double> dx;
  std::optional<double> dy;
  std::size_t vortices = 10;
  std::uint64_t seed = 0;
  double strength_min = -1.0;
  double strength_max = 1.0;
  double core_min = 0.15;
  double core_max = 0.35;
  std::string format = "binary";
  std::string out;
};

void add_gen(CLI::App& app, GenArgs& a) {
  app.add_option("--preset", a.preset, "vortices | turbulence | wake")
      ->check(CLI::IsMember({"vortices", "turbulence", "wake"}))
      ->capture_default_str();
  app.add_option("--nx", a.nx, "grid points in x")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  app.add_option("--ny", a.ny, "grid points in y")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  app.add_option("--dx", a.dx, "grid spacing in x (default 2*pi/nx)")->check(CLI::PositiveNumber);
  app.add_option("--dy", a.dy, "grid spacing in y (default 2*pi/ny)")->check(CLI::PositiveNumber);
  app.add_option("--vortices", a.vortices, "number of Gaussian vortices")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", a.seed, "RNG seed")->capture_default_str();
  app.add_option("--strength-min", a.strength_min)->capture_default_str();
  app.add_option("--strength-max", a.strength_max)->capture_default_str();
  app.add_option("--core-min", a.core_min)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--core-max", a.core_max)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", a.format, "binary | text")
      ->check(CLI::IsMember({"binary", "text"}))
      ->capture_default_str();
  app.add_option("--out", a.out, "output field path")->required();
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  VorticityField field = [&] {
    if (a.preset == "turbulence") return synth_turbulence_field(a.nx, a.ny, a.seed);
    if (a.preset == "wake") return synth_wake_field(a.nx, a.ny, a.seed);
    const double side = 2.0 * std::numbers::pi;
    const GridSpec grid{a.nx, a.ny, a.dx.value_or(side / static_cast<double>(a.nx)),
                        a.dy.value_or(side / static_cast<double>(a.ny))};
    try {
      return synth_vortex_field(grid, a.vortices, a.seed, {a.strength_min, a.strength_max},
                                {a.core_min, a.core_max});
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }();
  save_field(field, a.out, a.format == "text" ? FieldFormat::text : FieldFormat::binary);
  out << a.out << " " << field.grid().nx << "x" << field.grid().ny << " checksum "
      << hex64(field_checksum(field)) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- eig

struct EigArgs {
  std::string field;
  std::string method = "nystrom";
  std::string sampler = "halton";
  double fraction = 0.10;
  std::size_t k = 3;
  std::uint64_t seed = 0;
  bool gram = false;
  double pinv_rtol = 1e-12;
  double tol = 1e-10;
  std::size_t max_iters = 10000;
  double cap_gib = 2.0;
  std::size_t workers = 0;
  std::string out;
  std::string meta;
  std::string indices;
  std::string baseline;
};

void add_eig(CLI::App& app, EigArgs& a) {
  app.add_option("--field", a.field, "input field (binary or text)")->required();
  app.add_option("--method", a.method, "power | sketch | nystrom")
      ->check(CLI::IsMember({"power", "sketch", "sketch_svd", "nystrom"}))
      ->capture_default_str();
  app.add_option("--sampler", a.sampler, "uniform | halton")
      ->check(CLI::IsMember({"uniform", "halton"}))
      ->capture_default_str();
  app.add_option("--fraction", a.fraction, "share of columns sampled, in (0, 1]")->capture_default_str();
  app.add_option("--k", a.k, "number of eigenpairs")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", a.seed, "sampling / start-vector seed")->capture_default_str();
  app.add_flag("--gram", a.gram, "sketch: decompose C^T C instead of C");
  app.add_option("--pinv-rtol", a.pinv_rtol, "nystrom pseudo-inverse cutoff")->capture_default_str();
  app.add_option("--tol", a.tol, "power: convergence tolerance")->capture_default_str();
  app.add_option("--max-iters", a.max_iters, "power: iteration cap")->capture_default_str();
  app.add_option("--cap-gib", a.cap_gib, "power: largest dense matrix to materialize")->capture_default_str();
  app.add_option("--workers", a.workers, "threads (default VORTNET_THREADS or all cores)");
  app.add_option("--out", a.out, "eigenvector CSV")->required();
  app.add_option("--meta", a.meta, "metadata JSON (default <out>.json)");
  app.add_option("--indices", a.indices, "write sampled column indices here");
  app.add_option("--baseline", a.baseline, "eigenvector CSV to report the leading angle error against");
}

int cmd_eig(const EigArgs& a, std::ostream& out) {
  const Method method = parse_method(a.method);
  if (method != Method::power && (!(a.fraction > 0.0) || a.fraction > 1.0)) {
    throw UsageError("--fraction must lie in (0, 1]");
  }
  const VorticityField field = load_field(a.field);
  const std::size_t n = field.size();
  const std::size_t workers = a.workers == 0 ? default_workers() : a.workers;
  const AdjacencyOperator op(field, workers);

  EigenApproximation approx;
  RunInfo info{a.field, std::nullopt, a.seed};
  if (method == Method::power) {
    PowerOptions options{a.k, a.tol, a.max_iters, a.seed};
    if (memory_estimate(n) <= gib_to_bytes(a.cap_gib)) {
      approx = power_dominant(DenseSymmetricOperator(op.materialize(gib_to_bytes(a.cap_gib))), options);
    } else {
      approx = power_dominant(op, options);
    }
  } else {
    if (a.k > n) throw UsageError("--k exceeds n");
    const std::size_t used_l = sample_count(a.fraction, n, a.k);
    info.fraction = a.fraction;
    approx = run_randomized(op, field.grid(), method, parse_sampler(a.sampler), used_l, a.seed,
                            a.k, a.gram, a.pinv_rtol, workers);
    if (!a.indices.empty()) {
      std::ostringstream idx;
      write_indices(idx, *approx.sample);
      write_text_file(a.indices, idx.str());
    }
  }

  write_text_file(a.out, csv_text(approx.vectors));
  write_text_file(a.meta.empty() ? a.out + ".json" : a.meta, metadata_json(approx, info));

  out << to_string(approx.method) << " n=" << n
      << " l=" << (approx.sample ? approx.sample->size() : n) << " k=" << approx.k() << "\n";
  for (Eigen::Index i = 0; i < approx.values.size(); ++i) {
    out << "  lambda_" << i + 1 << " = " << format_double(approx.values(i)) << "\n";
  }
  if (approx.rank_deficient) out << "  warning: rank deficient, fewer pairs than requested\n";
  if (!a.baseline.empty()) {
    const Eigen::MatrixXd reference = load_vectors(a.baseline);
    if (reference.rows() != approx.vectors.rows()) {
      throw UsageError("--baseline has a different node count");
    }
    out << "  angle_error_deg = "
        << format_double(angle_error_deg(Eigen::VectorXd(approx.vectors.col(0)),
                                         Eigen::VectorXd(reference.col(0))))
        << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string vectors;
  std::string mode = "kmeans";
  std::size_t use_k = 3;
  std::size_t clusters = 7;
  std::size_t depth = 1;
  std::uint64_t seed = 0;
  std::size_t max_iters = 300;
  double tol = 1e-10;
  std::size_t restarts = 1;
  std::string out;
  std::string scores;
};

void add_cluster(CLI::App& app, ClusterArgs& a) {
  app.add_option("--vectors", a.vectors, "eigenvector CSV from 'eig'")->required();
  app.add_option("--mode", a.mode, "kmeans | sign")
      ->check(CLI::IsMember({"kmeans", "sign"}))
      ->capture_default_str();
  app.add_option("--use-k", a.use_k, "eigenvectors used as coordinates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--clusters", a.clusters, "k-means cluster count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--depth", a.depth, "sign mode: eigenvectors used for the sign code")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", a.seed, "k-means++ seed")->capture_default_str();
  app.add_option("--max-iters", a.max_iters)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol", a.tol)->capture_default_str();
  app.add_option("--restarts", a.restarts, "independent k-means++ starts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", a.out, "label CSV")->required();
  app.add_option("--scores", a.scores, "score-coordinate CSV");
}

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
  const Eigen::MatrixXd vectors = load_vectors(a.vectors);
  const auto available = static_cast<std::size_t>(vectors.cols());
  const std::size_t dims = a.mode == "sign" ? a.depth : a.use_k;
  if (dims > available) {
    throw UsageError((a.mode == "sign" ? "--depth " : "--use-k ") + std::to_string(dims) +
                     " exceeds the " + std::to_string(available) + " columns in " + a.vectors);
  }
  ClusterAssignment assignment;
  if (a.mode == "sign") {
    assignment = sign_partition(vectors, a.depth);
  } else {
    KMeansOptions options{a.clusters, a.seed, a.max_iters, a.tol, a.restarts};
    if (a.clusters > static_cast<std::size_t>(vectors.rows())) {
      throw UsageError("--clusters exceeds the node count");
    }
    assignment = kmeans_cluster(Eigen::MatrixXd(vectors.leftCols(static_cast<Eigen::Index>(a.use_k))), options);
  }
  std::ostringstream labels;
  write_labels_csv(labels, assignment.labels);
  write_text_file(a.out, labels.str());
  if (!a.scores.empty()) {
    std::ostringstream scores;
    write_scores_csv(scores, vectors.leftCols(static_cast<Eigen::Index>(dims)));
    write_text_file(a.scores, scores.str());
  }
  out << a.mode << " clusters=" << assignment.clusters
      << " inertia=" << format_double(assignment.inertia);
  if (a.mode == "kmeans") {
    out << " iterations=" << assignment.iterations << " repairs=" << assignment.repairs;
  }
  out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string field;
  std::string field_id;
  std::size_t k = 1;
  std::vector<double> fractions{0.01, 0.02, 0.05, 0.10, 0.20};
  std::size_t trials = 20;
  std::vector<std::string> samplers{"uniform", "halton"};
  std::vector<std::string> methods{"sketch_svd", "nystrom"};
  std::uint64_t base_seed = 0;
  std::size_t workers = 0;
  double cap_gib = 2.0;
  bool gram = false;
  std::string records;
  std::string summary;
};

void add_bench(CLI::App& app, BenchArgs& a) {
  app.add_option("--field", a.field, "input field")->required();
  app.add_option("--field-id", a.field_id, "label written to every record (default: file stem)");
  app.add_option("--k", a.k, "eigenpairs per approximation")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--fractions", a.fractions, "comma-separated sampling fractions")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--trials", a.trials, "trials per configuration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--samplers", a.samplers, "comma-separated: uniform,halton")
      ->delimiter(',')
      ->check(CLI::IsMember({"uniform", "halton"}))
      ->capture_default_str();
  app.add_option("--methods", a.methods, "comma-separated: sketch_svd,nystrom,power")
      ->delimiter(',')
      ->check(CLI::IsMember({"sketch", "sketch_svd", "nystrom", "power"}))
      ->capture_default_str();
  app.add_option("--base-seed", a.base_seed, "trial t uses seed base+t")->capture_default_str();
  app.add_option("--workers", a.workers, "concurrent trials (default VORTNET_THREADS or all cores)");
  app.add_option("--cap-gib", a.cap_gib, "largest dense baseline matrix")->capture_default_str();
  app.add_flag("--gram", a.gram, "sketch: decompose C^T C");
  app.add_option("--records", a.records, "per-trial CSV")->required();
  app.add_option("--summary", a.summary, "per-configuration summary CSV")->required();
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  for (double f : a.fractions) {
    if (!(f > 0.0) || f > 1.0) throw UsageError("--fractions entries must lie in (0, 1]");
  }
  const VorticityField field = load_field(a.field);
  SweepConfig config;
  config.field_id = a.field_id.empty() ? std::filesystem::path(a.field).stem().string() : a.field_id;
  config.k = a.k;
  config.fractions = a.fractions;
  config.trials = a.trials;
  config.samplers.clear();
  for (const auto& s : a.samplers) config.samplers.push_back(parse_sampler(s));
  config.methods.clear();
  for (const auto& m : a.methods) config.methods.push_back(parse_method(m));
  config.base_seed = a.base_seed;
  config.workers = a.workers;
  config.materialize_cap_bytes = gib_to_bytes(a.cap_gib);
  config.gram = a.gram;

  const SweepResult result = run_sweep(field, config);
  const auto summary = summarize(result.records);

  std::ostringstream records_csv, summary_csv;
  write_records_csv(records_csv, result.records);
  write_summary_csv(summary_csv, summary);
  write_text_file(a.records, records_csv.str());
  write_text_file(a.summary, summary_csv.str());

  out << "baseline lambda_1 = " << format_double(result.baseline.values(0)) << " ("
      << result.baseline.iterations.front() << " power iterations)\n";
  out << "records: " << result.records.size() << " -> " << a.records << "\n";
  for (const auto& row : summary) {
    out << "  " << to_string(row.method) << " "
        << (row.sampler ? to_string(*row.sampler) : "none") << " fraction="
        << format_double(row.fraction) << " l=" << row.l;
    if (row.error_deg) out << " median_err_deg=" << format_double(row.error_deg->median);
    out << " median_time_s=" << format_double(row.wall_time_s.median) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string source = "field";
  std::string input;
  std::size_t column = 0;
  std::string grid;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::string norm;
  std::string out;
};

void add_render(CLI::App& app, RenderArgs& a) {
  app.add_option("--source", a.source, "field | vector | centrality | labels")
      ->check(CLI::IsMember({"field", "vector", "centrality", "labels"}))
      ->capture_default_str();
  app.add_option("--input", a.input, "field file, eigenvector CSV or label CSV")->required();
  app.add_option("--column", a.column, "vector: zero-based eigenvector index")->capture_default_str();
  app.add_option("--grid", a.grid, "field file supplying nx, ny for CSV inputs");
  app.add_option("--nx", a.nx, "image width for CSV inputs");
  app.add_option("--ny", a.ny, "image height for CSV inputs");
  app.add_option("--norm", a.norm, "linear | symmetric (default: symmetric for field/vector)")
      ->check(CLI::IsMember({"linear", "symmetric"}));
  app.add_option("--out", a.out, "output PGM")->required();
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  std::vector<double> values;
  std::size_t nx = a.nx, ny = a.ny;
  if (a.source == "field") {
    const VorticityField field = load_field(a.input);
    values.assign(field.omega().begin(), field.omega().end());
    nx = field.grid().nx;
    ny = field.grid().ny;
  } else {
    if (!a.grid.empty()) {
      const VorticityField grid_field = load_field(a.grid);
      nx = grid_field.grid().nx;
      ny = grid_field.grid().ny;
    }
    if (nx == 0 || ny == 0) throw UsageError("CSV inputs need --grid or both --nx and --ny");
    if (a.source == "labels") {
      std::istringstream in(read_text_file(a.input));
      for (int label : read_labels_csv(in)) values.push_back(label);
    } else {
      const Eigen::MatrixXd vectors = load_vectors(a.input);
      const std::size_t column = a.source == "centrality" ? 0 : a.column;
      if (column >= static_cast<std::size_t>(vectors.cols())) {
        throw UsageError("--column " + std::to_string(column) + " but the CSV has " +
                         std::to_string(vectors.cols()) + " eigenvectors");
      }
      for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
        const double v = vectors(i, static_cast<Eigen::Index>(column));
        values.push_back(a.source == "centrality" ? std::abs(v) : v);
      }
    }
  }
  if (values.size() != nx * ny) {
    throw UsageError("input holds " + std::to_string(values.size()) + " values, grid is " +
                     std::to_string(nx) + "x" + std::to_string(ny));
  }
  const bool signed_source = a.source == "field" || a.source == "vector";
  const Normalization norm = a.norm.empty()
                                 ? (signed_source ? Normalization::symmetric : Normalization::linear)
                                 : parse_normalization(a.norm);
  write_text_file(a.out, render_pgm(values, nx, ny, norm));
  out << a.out << " " << nx << "x" << ny << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vortnet: randomized dominant eigenvectors of vortical interaction networks"};
  app.name("vortnet");
  app.require_subcommand(1);

  GenArgs gen;
  EigArgs eig;
  ClusterArgs cluster;
  BenchArgs bench;
  RenderArgs render;
  add_gen(*app.add_subcommand("gen", "synthesize a vorticity field"), gen);
  add_eig(*app.add_subcommand("eig", "approximate dominant eigenpairs"), eig);
  add_cluster(*app.add_subcommand("cluster", "spectral clustering of an eigenvector CSV"), cluster);
  add_bench(*app.add_subcommand("bench", "error / time sweep over sampling fractions"), bench);
  add_render(*app.add_subcommand("render", "write a PGM image of a field or node array"), render);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (app.got_subcommand("gen")) return cmd_gen(gen, out);
    if (app.got_subcommand("eig")) return cmd_eig(eig, out);
    if (app.got_subcommand("cluster")) return cmd_cluster(cluster, out);
    if (app.got_subcommand("bench")) return cmd_bench(bench, out);
    if (app.got_subcommand("render")) return cmd_render(render, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace vortnet::cli
