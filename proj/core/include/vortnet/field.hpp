#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace vortnet {

/// Uniform 2D grid. Node i sits at row r = i / nx, column c = i % nx and at
/// position (c * dx, r * dy).
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 1.0;
  double dy = 1.0;

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t row, std::size_t col) const { return row * nx + col; }
  std::pair<std::size_t, std::size_t> row_col(std::size_t i) const { return {i / nx, i % nx}; }
  double x(std::size_t i) const { return static_cast<double>(i % nx) * dx; }
  double y(std::size_t i) const { return static_cast<double>(i / nx) * dy; }

  /// Throws InvalidArgument unless nx, ny >= 2 and dx, dy are positive and finite.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Immutable row-major vorticity samples on a GridSpec.
class VorticityField {
 public:
  /// Validates the grid, the payload length and finiteness of every value.
  VorticityField(GridSpec grid, std::vector<double> omega);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> omega() const { return omega_; }
  std::size_t size() const { return omega_.size(); }
  double operator[](std::size_t i) const { return omega_[i]; }

  friend bool operator==(const VorticityField&, const VorticityField&) = default;

 private:
  GridSpec grid_;
  std::vector<double> omega_;
};

enum class FieldFormat { text, binary };

/// Reads a field. Throws IoError, MalformedHeaderError, DimensionMismatchError
/// or NonFiniteValueError.
VorticityField load_field(const std::filesystem::path& path, FieldFormat format);

/// Picks the format from the leading magic bytes.
VorticityField load_field(const std::filesystem::path& path);

void save_field(const VorticityField& field, const std::filesystem::path& path,
                FieldFormat format);

FieldFormat detect_field_format(const std::filesystem::path& path);

/// FNV-1a over the little-endian bytes of the grid header and the values.
std::uint64_t field_checksum(const VorticityField& field);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct GaussianVortex {
  double x = 0.0;
  double y = 0.0;
  double circulation = 0.0;
  double core_radius = 1.0;
};

/// omega(x, y) = sum_m G_m / (pi r_m^2) * exp(-|p - p_m|^2 / r_m^2).
VorticityField field_from_vortices(const GridSpec& grid,
                                   std::span<const GaussianVortex> vortices);

/// Draws `count` vortices: circulation uniform in `strength`, radius uniform in
/// `core`, centre uniform over [0, (nx-1)dx] x [0, (ny-1)dy].
std::vector<GaussianVortex> draw_vortices(const GridSpec& grid, std::size_t count,
                                          std::uint64_t seed, Interval strength,
                                          Interval core);

VorticityField synth_vortex_field(const GridSpec& grid, std::size_t count,
                                  std::uint64_t seed, Interval strength,
                                  Interval core);

/// Decaying-turbulence stand-in: 100 mixed-sign vortices on a 2*pi periodic-sized box.
VorticityField synth_turbulence_field(std::size_t nx, std::size_t ny, std::uint64_t seed);

/// Bluff-body wake stand-in: a staggered street of alternating-sign vortices
/// that weaken and spread downstream, with seeded centre jitter.
VorticityField synth_wake_field(std::size_t nx, std::size_t ny, std::uint64_t seed);

}  // namespace vortnet
