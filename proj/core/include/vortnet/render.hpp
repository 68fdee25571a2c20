#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace vortnet {

enum class Normalization {
  /// min -> 0, max -> 255.
  linear,
  /// 0 -> 128, +max|v| -> 255, -max|v| -> 1.
  symmetric,
};

Normalization parse_normalization(std::string_view name);

/// Binary 8-bit PGM (P5) of a row-major nx x ny array. Grid row ny-1 is the
/// top image row so that y points up.
std::string render_pgm(std::span<const double> values, std::size_t nx, std::size_t ny,
                       Normalization normalization);

}  // namespace vortnet
