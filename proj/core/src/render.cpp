#include "vortnet/render.hpp"

#include <algorithm>
#include <cmath>

#include "vortnet/error.hpp"

namespace vortnet {

Normalization parse_normalization(std::string_view name) {
  if (name == "linear") return Normalization::linear;
  if (name == "symmetric") return Normalization::symmetric;
  throw InvalidArgument("unknown normalization '" + std::string(name) + "'");
}

std::string render_pgm(std::span<const double> values, std::size_t nx, std::size_t ny,
                       Normalization normalization) {
  if (nx == 0 || ny == 0 || values.size() != nx * ny) {
    throw InvalidArgument("render: value count " + std::to_string(values.size()) +
                          " does not match " + std::to_string(nx) + "x" + std::to_string(ny));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("render: non-finite value");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double peak = std::max(std::abs(lo), std::abs(hi));

  auto gray = [&](double v) -> unsigned char {
    double level = 0.0;
    if (normalization == Normalization::symmetric) {
      level = peak > 0 ? 128.0 + 127.0 * (v / peak) : 128.0;
    } else {
      level = hi > lo ? 255.0 * (v - lo) / (hi - lo) : 0.0;
    }
    return static_cast<unsigned char>(std::clamp(std::lround(level), 0L, 255L));
  };

  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  out.reserve(out.size() + nx * ny);
  for (std::size_t r = ny; r-- > 0;) {
    for (std::size_t c = 0; c < nx; ++c) out.push_back(static_cast<char>(gray(values[r * nx + c])));
  }
  return out;
}

}  // namespace vortnet
