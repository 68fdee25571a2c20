#include "vortnet/io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "vortnet/error.hpp"

namespace vortnet {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw FormatError("unparseable CSV cell '" + cell + "'");
  }
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_vectors_csv(std::ostream& out, const Eigen::MatrixXd& vectors) {
  out << "node";
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) out << ",u" << c + 1;
  out << '\n';
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    out << r;
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) out << ',' << format_double(vectors(r, c));
    out << '\n';
  }
}

Eigen::MatrixXd read_vectors_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("eigenvector CSV is empty");
  const auto header = split_csv(strip_cr(line));
  if (header.size() < 2 || header[0] != "node") {
    throw FormatError("eigenvector CSV header must be 'node,u1,...'");
  }
  const std::size_t k = header.size() - 1;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != k + 1) {
      throw FormatError("eigenvector CSV row " + std::to_string(rows) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(k + 1));
    }
    if (static_cast<std::size_t>(parse_cell(cells[0])) != rows) {
      throw FormatError("eigenvector CSV rows must be in node order");
    }
    for (std::size_t c = 1; c <= k; ++c) values.push_back(parse_cell(cells[c]));
    ++rows;
  }
  if (rows == 0) throw FormatError("eigenvector CSV has no rows");
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * k + c];
    }
  }
  return vectors;
}

std::string metadata_json(const EigenApproximation& approx, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(approx.method));
  j["sampler"] = approx.sample ? std::string(to_string(approx.sample->sampler)) : "none";
  j["seed"] = info.seed;
  j["field"] = info.field;
  j["n"] = approx.n();
  j["l"] = approx.sample ? approx.sample->size() : approx.n();
  if (info.fraction) j["fraction"] = *info.fraction;
  j["k"] = approx.k();
  j["eigenvalues"] = std::vector<double>(approx.values.data(),
                                         approx.values.data() + approx.values.size());
  j["prenormalization_norms"] = std::vector<double>(
      approx.raw_norms.data(), approx.raw_norms.data() + approx.raw_norms.size());
  j["rank_deficient"] = approx.rank_deficient;
  if (approx.method == Method::sketch_svd) {
    j["note"] = "eigenvalues are rescaled singular values and estimate |lambda|";
  }
  if (!approx.iterations.empty()) {
    j["iterations"] = approx.iterations;
    j["final_gaps"] = approx.residuals;
  }
  j["timings_s"] = {{"sketch", approx.times.sketch},
                    {"decompose", approx.times.decompose},
                    {"reconstruct", approx.times.reconstruct},
                    {"total", approx.times.total()}};
  return j.dump(2) + "\n";
}

void write_labels_csv(std::ostream& out, std::span<const int> labels) {
  out << "node,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

std::vector<int> read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "node,label") {
    throw FormatError("label CSV header must be 'node,label'");
  }
  std::vector<int> labels;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw FormatError("label CSV rows need two cells");
    labels.push_back(static_cast<int>(parse_cell(cells[1])));
  }
  return labels;
}

void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores) {
  out << "node";
  for (Eigen::Index c = 0; c < scores.cols(); ++c) out << ",s" << c + 1;
  out << '\n';
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    out << r;
    for (Eigen::Index c = 0; c < scores.cols(); ++c) out << ',' << format_double(scores(r, c));
    out << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace vortnet
