#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vortnet/field.hpp"

namespace vortnet {

enum class SamplerKind { uniform, halton };

std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

/// Ordered list J of distinct column indices, plus how it was drawn.
struct SampleIndexSet {
  std::vector<std::size_t> indices;
  SamplerKind sampler = SamplerKind::uniform;
  std::uint64_t seed = 0;
  std::size_t n = 0;

  std::size_t size() const { return indices.size(); }
};

/// Base-b radical inverse: the digits of t mirrored about the radix point.
double radical_inverse(std::uint64_t t, unsigned base);

/// l indices drawn without replacement (partial Fisher-Yates) in draw order.
SampleIndexSet sample_uniform(std::size_t n, std::size_t l, std::uint64_t seed);

/// Maps 2D Halton points (bases 2, 3) for t = offset+1, offset+2, ... onto grid
/// cells (floor(hx nx), floor(hy ny)), skipping cells already taken, until l
/// distinct node indices exist.
SampleIndexSet sample_halton(const GridSpec& grid, std::size_t l, std::uint64_t offset);

/// Seeded draw used by the CLI and the sweep. For Halton the seed selects the
/// block of the sequence starting at offset seed * l, so successive seeds use
/// disjoint runs of points.
SampleIndexSet draw_sample(SamplerKind kind, const GridSpec& grid, std::size_t l,
                           std::uint64_t seed);

/// One index per line.
void write_indices(std::ostream& out, const SampleIndexSet& sample);
std::vector<std::size_t> read_indices(std::istream& in);

}  // namespace vortnet
