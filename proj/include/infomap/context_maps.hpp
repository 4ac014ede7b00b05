#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/error.hpp"
#include "infomap/image.hpp"
#include "infomap/information_map.hpp"
#include "infomap/native_format.hpp"

namespace infomap::context {

inline constexpr double kPriorTolerance = 1e-6;

/// Per-class prior probability maps over one shared grid. Wherever every
/// class is known the values should sum to one.
struct ClassPriorSet {
  std::vector<std::string> classes;
  std::vector<InformationMap> maps;
};

struct PriorViolation {
  CellIndex cell;
  double sum = 0.0;

  friend bool operator==(const PriorViolation&, const PriorViolation&) = default;
};

/// Cells (with all classes known) whose priors do not sum to one within
/// kPriorTolerance. An empty result means the set is valid.
inline std::vector<PriorViolation> validate_priors(const ClassPriorSet& set) {
  if (set.classes.size() < 2 || set.maps.size() != set.classes.size())
    throw Error(ErrorCode::InvalidArgument, "a prior set needs at least two classes, one map each");
  const GridSpec& spec = set.maps.front().spec();
  for (std::size_t i = 1; i < set.maps.size(); ++i)
    if (!(set.maps[i].spec() == spec))
      throw Error(ErrorCode::SpecMismatch, "prior map for '" + set.classes[i] + "' uses a different grid");

  std::vector<PriorViolation> out;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      double sum = 0.0;
      bool known = true;
      for (const auto& m : set.maps) {
        const double v = m.at(r, c);
        if (is_unknown(v)) {
          known = false;
          break;
        }
        sum += v;
      }
      if (known && std::abs(sum - 1.0) > kPriorTolerance) out.push_back({{r, c}, sum});
    }
  }
  return out;
}

/// Class distribution at `p`. Falls back to uniform where any class is
/// unknown; out-of-grid policy values are renormalized.
inline std::vector<double> prior_at(const ClassPriorSet& set, WorldPosition p) {
  const std::size_t n = set.maps.size();
  const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
  std::vector<double> values;
  values.reserve(n);
  for (const auto& m : set.maps) {
    const double v = m.value_at(p);
    if (is_unknown(v)) return uniform;
    values.push_back(v);
  }
  if (!world_to_cell(set.maps.front().spec(), p)) {
    double sum = 0.0;
    for (double v : values) sum += v;
    if (!(sum > 0.0)) return uniform;
    for (double& v : values) v /= sum;
  }
  return values;
}

/// `label path` per line; paths relative to `base_dir`.
inline ClassPriorSet parse_prior_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  ClassPriorSet set;
  for (const auto& line : detail::content_lines(text)) {
    const auto tok = detail::split_ws(line.text);
    if (tok.size() != 2) throw Error(ErrorCode::FormatError, "expected '<class> <map path>'", line.offset);
    std::filesystem::path path(tok[1]);
    if (path.is_relative()) path = base_dir / path;
    set.classes.emplace_back(tok[0]);
    set.maps.push_back(load_native_file(path));
  }
  return set;
}

inline ClassPriorSet load_prior_manifest(const std::filesystem::path& path) {
  return parse_prior_manifest(detail::read_file(path), path.parent_path());
}

/// Map of 8-bit palette indices, each standing for an initial orientation.
class OrientationMap {
 public:
  /// Throws PaletteMiss if a known cell holds an index not in the palette.
  OrientationMap(InformationMap indices, std::map<std::uint8_t, double> palette)
      : map_(std::move(indices)), palette_(std::move(palette)) {
    if (palette_.empty()) throw Error(ErrorCode::InvalidArgument, "orientation palette is empty");
    for (const auto& [index, angle] : palette_)
      if (!(angle >= -std::numbers::pi && angle < std::numbers::pi))
        throw Error(ErrorCode::InvalidRange, "palette orientation " + std::to_string(angle) + " outside [-pi, pi)");
    for (double v : map_.values())
      if (!is_unknown(v)) palette_index(v);
  }

  /// Orientation in radians at `p`; nullopt on unknown cells and on
  /// out-of-grid defaults that name no palette entry.
  std::optional<double> orientation_at(WorldPosition p) const {
    const double v = map_.value_at(p);
    if (is_unknown(v)) return std::nullopt;
    if (!world_to_cell(map_.spec(), p) && map_.oob_policy() == OobPolicy::DefaultValue) {
      const auto it = palette_.find(static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)));
      if (it == palette_.end() || std::round(v) != v) return std::nullopt;
      return it->second;
    }
    return palette_.at(palette_index(v));
  }

  const InformationMap& map() const { return map_; }
  const std::map<std::uint8_t, double>& palette() const { return palette_; }

 private:
  std::uint8_t palette_index(double v) const {
    const double r = std::round(v);
    if (r != v || r < 0.0 || r > 255.0 || !palette_.contains(static_cast<std::uint8_t>(r)))
      throw Error(ErrorCode::PaletteMiss, "cell value " + std::to_string(v) + " is not a palette index");
    return static_cast<std::uint8_t>(r);
  }

  InformationMap map_;
  std::map<std::uint8_t, double> palette_;
};

/// Palette sidecar: `index orientation_radians` per line.
inline std::map<std::uint8_t, double> parse_palette(std::string_view text) {
  std::map<std::uint8_t, double> palette;
  for (const auto& line : detail::content_lines(text)) {
    const auto tok = detail::split_ws(line.text);
    const auto index = tok.size() == 2 ? detail::parse_int<int>(tok[0]) : std::nullopt;
    const auto angle = tok.size() == 2 ? detail::parse_double(tok[1]) : std::nullopt;
    if (!index || !angle || *index < 0 || *index > 255)
      throw Error(ErrorCode::FormatError, "expected '<index 0-255> <radians>'", line.offset);
    if (!palette.emplace(static_cast<std::uint8_t>(*index), *angle).second)
      throw Error(ErrorCode::FormatError, "palette index listed twice", line.offset);
  }
  return palette;
}

/// Orientation indices as a raw 8-bit raster (pixel value = palette index).
inline OrientationMap orientation_from_raster(const Raster& raster, const GridSpec& spec,
                                              std::map<std::uint8_t, double> palette,
                                              std::optional<std::uint8_t> unknown_pixel = std::nullopt) {
  if (raster.rows != spec.rows || raster.cols != spec.cols || raster.pixels.size() != spec.cell_count())
    throw Error(ErrorCode::DimensionMismatch, "orientation raster does not match the grid");
  // Pixels outside the palette are unpainted and carry no orientation.
  std::vector<double> values(raster.pixels.size(), kUnknown);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto px = raster.pixels[i];
    if (unknown_pixel && px == *unknown_pixel) continue;
    if (palette.contains(px)) values[i] = static_cast<double>(px);
  }
  InformationMap indices(spec, std::move(values), 0.0, 255.0, OobPolicy::DefaultValue, 0.0);
  return OrientationMap(std::move(indices), std::move(palette));
}

/// Search radius (meters) for grid-based clustering. Values are never negative.
class RadiusMap {
 public:
  explicit RadiusMap(InformationMap map) : map_(std::move(map)) {
    if (map_.vmin() < 0.0) throw Error(ErrorCode::InvalidRange, "radius map needs vmin >= 0");
  }

  /// Unknown cells answer the map's out-of-bounds default.
  double radius_at(WorldPosition p) const {
    const double v = map_.value_at(p);
    return is_unknown(v) ? map_.oob_default() : v;
  }

  const InformationMap& map() const { return map_; }

 private:
  InformationMap map_;
};

}  // namespace infomap::context
