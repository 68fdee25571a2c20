#include "vortnet/sampling.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "vortnet/error.hpp"

namespace vortnet {
namespace {

void check_count(std::size_t n, std::size_t l) {
  if (l == 0) throw InvalidArgument("sample size must be at least 1");
  if (l > n) {
    throw InvalidArgument("sample size " + std::to_string(l) + " exceeds column count " +
                          std::to_string(n));
  }
}

std::size_t cell_coordinate(double h, std::size_t extent) {
  const auto c = static_cast<std::size_t>(h * static_cast<double>(extent));
  return c < extent ? c : extent - 1;
}

}  // namespace

std::string_view to_string(SamplerKind kind) {
  return kind == SamplerKind::halton ? "halton" : "uniform";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "uniform") return SamplerKind::uniform;
  if (name == "halton") return SamplerKind::halton;
  throw InvalidArgument("unknown sampler '" + std::string(name) + "'");
}

double radical_inverse(std::uint64_t t, unsigned base) {
  if (base < 2) throw InvalidArgument("radical inverse base must be >= 2");
  // Leading digits are accumulated as an exact integer fraction so that short
  // expansions (e.g. 1/9) come out correctly rounded.
  constexpr std::uint64_t kExact = std::uint64_t{1} << 53;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  while (t > 0 && denominator <= kExact / base) {
    numerator = numerator * base + t % base;
    denominator *= base;
    t /= base;
  }
  double value = static_cast<double>(numerator) / static_cast<double>(denominator);
  double scale = 1.0 / static_cast<double>(denominator);
  while (t > 0) {
    scale /= base;
    value += static_cast<double>(t % base) * scale;
    t /= base;
  }
  return value;
}

SampleIndexSet sample_uniform(std::size_t n, std::size_t l, std::uint64_t seed) {
  check_count(n, l);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < l; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(l);
  return {std::move(pool), SamplerKind::uniform, seed, n};
}

SampleIndexSet sample_halton(const GridSpec& grid, std::size_t l, std::uint64_t offset) {
  grid.validate();
  const std::size_t n = grid.size();
  check_count(n, l);
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> indices;
  indices.reserve(l);
  // The Halton sequence is dense in the unit square, so every cell is hit
  // eventually; the cap only guards against a pathological grid.
  const std::uint64_t max_points = 1024 * static_cast<std::uint64_t>(n) + (1u << 20);
  std::uint64_t t = offset;
  for (std::uint64_t drawn = 0; indices.size() < l; ++drawn) {
    if (drawn == max_points) {
      throw Error("Halton sampling failed to find " + std::to_string(l) +
                  " distinct cells after " + std::to_string(max_points) + " points");
    }
    ++t;
    const std::size_t c = cell_coordinate(radical_inverse(t, 2), grid.nx);
    const std::size_t r = cell_coordinate(radical_inverse(t, 3), grid.ny);
    const std::size_t i = grid.index(r, c);
    if (taken[i]) continue;
    taken[i] = true;
    indices.push_back(i);
  }
  return {std::move(indices), SamplerKind::halton, offset, n};
}

SampleIndexSet draw_sample(SamplerKind kind, const GridSpec& grid, std::size_t l,
                           std::uint64_t seed) {
  if (kind == SamplerKind::uniform) return sample_uniform(grid.size(), l, seed);
  SampleIndexSet set = sample_halton(grid, l, seed * static_cast<std::uint64_t>(l));
  set.seed = seed;
  return set;
}

void write_indices(std::ostream& out, const SampleIndexSet& sample) {
  for (std::size_t i : sample.indices) out << i << '\n';
}

std::vector<std::size_t> read_indices(std::istream& in) {
  std::vector<std::size_t> indices;
  std::size_t value = 0;
  while (in >> value) indices.push_back(value);
  if (!in.eof()) throw FormatError("index list contains a non-integer token");
  return indices;
}

}  // namespace vortnet
