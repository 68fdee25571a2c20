#include "vortnet/field.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "vortnet/error.hpp"
#include "vortnet/format.hpp"

namespace vortnet {
namespace {

constexpr std::string_view kBinaryMagic = "VORT1\n";

template <class T>
T to_little_endian(T value) {
  static_assert(sizeof(T) == 8);
  if constexpr (std::endian::native == std::endian::big) {
    auto bits = std::bit_cast<std::uint64_t>(value);
    bits = __builtin_bswap64(bits);
    return std::bit_cast<T>(bits);
  }
  return value;
}

template <class T>
void put(std::string& buf, T value) {
  const T le = to_little_endian(value);
  char bytes[8];
  std::memcpy(bytes, &le, 8);
  buf.append(bytes, 8);
}

template <class T>
T get(std::string_view buf, std::size_t offset) {
  T value;
  std::memcpy(&value, buf.data() + offset, 8);
  return to_little_endian(value);
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return data;
}

void write_all(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_size(std::string_view token, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool is_comment(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos != std::string_view::npos && line[pos] == '#';
}

GridSpec checked_grid(std::size_t nx, std::size_t ny, double dx, double dy) {
  GridSpec grid{nx, ny, dx, dy};
  try {
    grid.validate();
  } catch (const InvalidArgument& e) {
    throw MalformedHeaderError(std::string("invalid grid header: ") + e.what());
  }
  return grid;
}

VorticityField parse_text(const std::string& data) {
  std::istringstream in(data);
  std::string line;
  bool have_header = false;
  GridSpec grid;
  std::vector<double> omega;
  while (std::getline(in, line)) {
    if (is_comment(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (!have_header) {
      std::size_t nx = 0, ny = 0;
      double dx = 0, dy = 0;
      if (tokens.size() != 4 || !parse_size(tokens[0], nx) || !parse_size(tokens[1], ny) ||
          !parse_double(tokens[2], dx) || !parse_double(tokens[3], dy)) {
        throw MalformedHeaderError("text field header must be 'nx ny dx dy', got '" + line + "'");
      }
      grid = checked_grid(nx, ny, dx, dy);
      omega.reserve(grid.size());
      have_header = true;
      continue;
    }
    for (auto token : tokens) {
      double value = 0;
      if (!parse_double(token, value)) {
        throw FormatError("unparseable vorticity value '" + std::string(token) + "'");
      }
      if (!std::isfinite(value)) {
        throw NonFiniteValueError("non-finite vorticity value at index " +
                                  std::to_string(omega.size()));
      }
      omega.push_back(value);
    }
  }
  if (!have_header) throw MalformedHeaderError("text field has no header line");
  if (omega.size() != grid.size()) {
    throw DimensionMismatchError("header declares " + std::to_string(grid.size()) +
                                 " values, file carries " + std::to_string(omega.size()));
  }
  return VorticityField(grid, std::move(omega));
}

VorticityField parse_binary(std::string_view data) {
  constexpr std::size_t header = kBinaryMagic.size() + 4 * 8;
  if (data.substr(0, kBinaryMagic.size()) != kBinaryMagic) {
    throw MalformedHeaderError("missing VORT1 magic");
  }
  if (data.size() < header) throw MalformedHeaderError("truncated binary header");
  std::size_t offset = kBinaryMagic.size();
  const auto nx = get<std::uint64_t>(data, offset);
  const auto ny = get<std::uint64_t>(data, offset + 8);
  const auto dx = get<double>(data, offset + 16);
  const auto dy = get<double>(data, offset + 24);
  const GridSpec grid = checked_grid(nx, ny, dx, dy);
  const std::size_t payload = data.size() - header;
  if (nx > (SIZE_MAX / 8) / ny || payload % 8 != 0 || payload / 8 != grid.size()) {
    throw DimensionMismatchError("header declares " + std::to_string(nx) + "x" +
                                 std::to_string(ny) + " values, payload holds " +
                                 std::to_string(payload / 8) +
                                 (payload % 8 ? " and a partial value" : ""));
  }
  std::vector<double> omega(grid.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    omega[i] = get<double>(data, header + 8 * i);
    if (!std::isfinite(omega[i])) {
      throw NonFiniteValueError("non-finite vorticity value at index " + std::to_string(i));
    }
  }
  return VorticityField(grid, std::move(omega));
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw InvalidArgument("grid needs nx >= 2 and ny >= 2");
  if (!(dx > 0) || !(dy > 0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw InvalidArgument("grid spacing must be positive and finite");
  }
}

VorticityField::VorticityField(GridSpec grid, std::vector<double> omega)
    : grid_(grid), omega_(std::move(omega)) {
  grid_.validate();
  if (omega_.size() != grid_.size()) {
    throw DimensionMismatchError("field payload length " + std::to_string(omega_.size()) +
                                 " != nx*ny = " + std::to_string(grid_.size()));
  }
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    if (!std::isfinite(omega_[i])) {
      throw NonFiniteValueError("non-finite vorticity value at index " + std::to_string(i));
    }
  }
}

FieldFormat detect_field_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  char head[6] = {};
  in.read(head, 6);
  return std::string_view(head, static_cast<std::size_t>(in.gcount())) == kBinaryMagic
             ? FieldFormat::binary
             : FieldFormat::text;
}

VorticityField load_field(const std::filesystem::path& path, FieldFormat format) {
  const std::string data = read_all(path);
  return format == FieldFormat::binary ? parse_binary(data) : parse_text(data);
}

VorticityField load_field(const std::filesystem::path& path) {
  return load_field(path, detect_field_format(path));
}

void save_field(const VorticityField& field, const std::filesystem::path& path,
                FieldFormat format) {
  const GridSpec& g = field.grid();
  std::string buf;
  if (format == FieldFormat::binary) {
    buf.reserve(kBinaryMagic.size() + 32 + 8 * field.size());
    buf.append(kBinaryMagic);
    put<std::uint64_t>(buf, g.nx);
    put<std::uint64_t>(buf, g.ny);
    put<double>(buf, g.dx);
    put<double>(buf, g.dy);
    for (double w : field.omega()) put<double>(buf, w);
  } else {
    buf = std::to_string(g.nx) + " " + std::to_string(g.ny) + " " + format_double(g.dx) +
          " " + format_double(g.dy) + "\n";
    for (std::size_t r = 0; r < g.ny; ++r) {
      for (std::size_t c = 0; c < g.nx; ++c) {
        if (c) buf += ' ';
        buf += format_double(field[g.index(r, c)]);
      }
      buf += '\n';
    }
  }
  write_all(path, buf);
}

std::uint64_t field_checksum(const VorticityField& field) {
  std::string bytes;
  const GridSpec& g = field.grid();
  put<std::uint64_t>(bytes, g.nx);
  put<std::uint64_t>(bytes, g.ny);
  put<double>(bytes, g.dx);
  put<double>(bytes, g.dy);
  for (double w : field.omega()) put<double>(bytes, w);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

VorticityField field_from_vortices(const GridSpec& grid,
                                   std::span<const GaussianVortex> vortices) {
  grid.validate();
  std::vector<double> omega(grid.size(), 0.0);
  for (const auto& v : vortices) {
    if (!(v.core_radius > 0)) throw InvalidArgument("vortex core radius must be positive");
    const double r2 = v.core_radius * v.core_radius;
    const double peak = v.circulation / (std::numbers::pi * r2);
    for (std::size_t i = 0; i < omega.size(); ++i) {
      const double ddx = grid.x(i) - v.x;
      const double ddy = grid.y(i) - v.y;
      omega[i] += peak * std::exp(-(ddx * ddx + ddy * ddy) / r2);
    }
  }
  return VorticityField(grid, std::move(omega));
}

std::vector<GaussianVortex> draw_vortices(const GridSpec& grid, std::size_t count,
                                          std::uint64_t seed, Interval strength,
                                          Interval core) {
  grid.validate();
  if (count == 0) throw InvalidArgument("vortex count must be at least 1");
  if (!(strength.lo <= strength.hi) || !std::isfinite(strength.lo) ||
      !std::isfinite(strength.hi)) {
    throw InvalidArgument("strength range must be a finite nonempty interval");
  }
  if (!(core.lo > 0) || !(core.lo <= core.hi) || !std::isfinite(core.hi)) {
    throw InvalidArgument("core radius range must be a finite positive interval");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(grid.nx - 1) * grid.dx);
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(grid.ny - 1) * grid.dy);
  std::uniform_real_distribution<double> ug(strength.lo, strength.hi);
  std::uniform_real_distribution<double> ur(core.lo, core.hi);
  std::vector<GaussianVortex> vortices(count);
  for (auto& v : vortices) {
    v.x = ux(rng);
    v.y = uy(rng);
    v.circulation = ug(rng);
    v.core_radius = ur(rng);
  }
  return vortices;
}

VorticityField synth_vortex_field(const GridSpec& grid, std::size_t count,
                                  std::uint64_t seed, Interval strength,
                                  Interval core) {
  const auto vortices = draw_vortices(grid, count, seed, strength, core);
  return field_from_vortices(grid, vortices);
}

VorticityField synth_turbulence_field(std::size_t nx, std::size_t ny, std::uint64_t seed) {
  const double side = 2.0 * std::numbers::pi;
  const GridSpec grid{nx, ny, side / static_cast<double>(nx), side / static_cast<double>(ny)};
  return synth_vortex_field(grid, 100, seed, {-1.0, 1.0}, {0.15, 0.35});
}

VorticityField synth_wake_field(std::size_t nx, std::size_t ny, std::uint64_t seed) {
  // Street parameters in body-length units on a 4 x 4 window.
  constexpr double kWindow = 4.0;
  constexpr double kFirstX = 0.35;
  constexpr double kSpacing = 1.6;      // streamwise distance between same-row vortices
  constexpr double kAspect = 0.3;       // row separation / spacing (Karman ratio ~0.28)
  constexpr double kDecay = 1.0;        // circulation decay rate downstream
  constexpr double kCore0 = 0.35;
  constexpr double kCoreGrowth = 0.05;
  constexpr double kJitter = 0.02;

  const GridSpec grid{nx, ny, kWindow / static_cast<double>(nx),
                      kWindow / static_cast<double>(ny)};
  grid.validate();
  const double length = static_cast<double>(nx - 1) * grid.dx;
  const double centre = static_cast<double>(ny - 1) * grid.dy / 2.0;
  const double half_gap = kAspect * kSpacing / 2.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, kJitter);
  std::vector<GaussianVortex> street;
  bool upper = true;
  for (double x = kFirstX; x < length + 0.5; x += kSpacing / 2.0, upper = !upper) {
    GaussianVortex v;
    v.x = x + jitter(rng);
    v.y = centre + (upper ? half_gap : -half_gap) + jitter(rng);
    v.circulation = (upper ? -1.0 : 1.0) * std::exp(-kDecay * x);
    v.core_radius = kCore0 + kCoreGrowth * x;
    street.push_back(v);
  }
  return field_from_vortices(grid, street);
}

}  // namespace vortnet
