#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/error.hpp"
#include "infomap/information_map.hpp"

namespace infomap {

/// 8-bit single-channel raster, row 0 at the top.
struct Raster {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int r, int c) const {
    return pixels.at(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c));
  }
  friend bool operator==(const Raster&, const Raster&) = default;
};

/// An exported map: the raster plus the pixel value reserved for unknown
/// cells, if the map had any.
struct ExportedImage {
  Raster raster;
  std::optional<std::uint8_t> unknown_pixel;
};

inline std::uint8_t quantize(double value, double vmin, double vmax) {
  const double q = std::round(255.0 * (value - vmin) / (vmax - vmin));
  return static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
}

inline double dequantize(std::uint8_t pixel, double vmin, double vmax) {
  if (pixel == 255) return vmax;
  const double v = vmin + (static_cast<double>(pixel) / 255.0) * (vmax - vmin);
  return std::clamp(v, vmin, vmax);
}

/// Linear map from [vmin, vmax] to [0, 255]. Unknown cells get a pixel
/// value no known cell uses (searched from 255 downwards).
inline ExportedImage export_image(const InformationMap& map) {
  ExportedImage out;
  out.raster.rows = map.rows();
  out.raster.cols = map.cols();
  out.raster.pixels.resize(map.values().size());
  std::array<bool, 256> used{};
  bool any_unknown = false;
  const auto values = map.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (is_unknown(values[i])) {
      any_unknown = true;
      continue;
    }
    const auto px = quantize(values[i], map.vmin(), map.vmax());
    out.raster.pixels[i] = px;
    used[px] = true;
  }
  if (any_unknown) {
    int free = -1;
    for (int p = 255; p >= 0; --p) {
      if (!used[static_cast<std::size_t>(p)]) {
        free = p;
        break;
      }
    }
    if (free < 0)
      throw Error(ErrorCode::FormatError, "all 256 pixel values are in use; no pixel left to mark unknown cells");
    out.unknown_pixel = static_cast<std::uint8_t>(free);
    for (std::size_t i = 0; i < values.size(); ++i)
      if (is_unknown(values[i])) out.raster.pixels[i] = *out.unknown_pixel;
  }
  return out;
}

inline InformationMap import_image(const Raster& raster, const GridSpec& spec, double vmin, double vmax,
                                   OobPolicy oob = OobPolicy::DefaultValue,
                                   std::optional<double> oob_default = std::nullopt,
                                   std::optional<std::uint8_t> unknown_pixel = std::nullopt) {
  if (raster.rows != spec.rows || raster.cols != spec.cols ||
      raster.pixels.size() != spec.cell_count())
    throw Error(ErrorCode::DimensionMismatch, "raster is " + std::to_string(raster.rows) + "x" +
                                                  std::to_string(raster.cols) + ", grid is " +
                                                  std::to_string(spec.rows) + "x" + std::to_string(spec.cols));
  if (!(vmin < vmax)) throw Error(ErrorCode::InvalidRange, "value range needs vmin < vmax");
  std::vector<double> values(raster.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto px = raster.pixels[i];
    values[i] = (unknown_pixel && px == *unknown_pixel) ? kUnknown : dequantize(px, vmin, vmax);
  }
  return InformationMap(spec, std::move(values), vmin, vmax, oob, oob_default.value_or(vmin));
}

// Binary PGM (P5), maxval 255. The unknown pixel travels in a header
// comment line "# infomap-unknown <pixel>".

inline std::string write_pgm(const Raster& raster, std::optional<std::uint8_t> unknown_pixel = std::nullopt) {
  std::string out = "P5\n";
  if (unknown_pixel) out += "# infomap-unknown " + std::to_string(*unknown_pixel) + "\n";
  out += std::to_string(raster.cols) + " " + std::to_string(raster.rows) + "\n255\n";
  out.append(reinterpret_cast<const char*>(raster.pixels.data()), raster.pixels.size());
  return out;
}

inline std::string write_pgm(const ExportedImage& image) { return write_pgm(image.raster, image.unknown_pixel); }

inline ExportedImage read_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  ExportedImage out;
  auto fail = [](std::size_t at, const std::string& why) { throw Error(ErrorCode::FormatError, why, at); };

  auto skip_space_and_comments = [&] {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        const auto eol = bytes.find('\n', pos);
        const auto comment = detail::split_ws(bytes.substr(pos + 1, (eol == std::string_view::npos ? bytes.size() : eol) - pos - 1));
        if (comment.size() == 2 && comment[0] == "infomap-unknown") {
          const auto px = detail::parse_int<int>(comment[1]);
          if (!px || *px < 0 || *px > 255) fail(pos, "bad infomap-unknown pixel");
          out.unknown_pixel = static_cast<std::uint8_t>(*px);
        }
        pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
        continue;
      }
      return;
    }
  };
  auto read_int = [&](const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    const auto v = detail::parse_int<int>(bytes.substr(start, pos - start));
    if (!v) fail(start, std::string("bad PGM ") + what);
    return *v;
  };

  if (bytes.substr(0, 2) != "P5") fail(0, "not a binary PGM (P5)");
  pos = 2;
  const int cols = read_int("width");
  const int rows = read_int("height");
  const int maxval = read_int("maxval");
  if (cols < 1 || rows < 1) fail(pos, "PGM dimensions must be positive");
  if (maxval != 255) fail(pos, "only 8-bit PGM (maxval 255) is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    fail(pos, "missing whitespace after PGM header");
  ++pos;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() - pos < count) fail(bytes.size(), "truncated PGM pixel data");
  out.raster.rows = rows;
  out.raster.cols = cols;
  out.raster.pixels.assign(reinterpret_cast<const std::uint8_t*>(bytes.data() + pos),
                           reinterpret_cast<const std::uint8_t*>(bytes.data() + pos + count));
  return out;
}

inline void write_pgm_file(const ExportedImage& image, const std::filesystem::path& path) {
  detail::write_file(path, write_pgm(image));
}

inline ExportedImage read_pgm_file(const std::filesystem::path& path) { return read_pgm(detail::read_file(path)); }

}  // namespace infomap
