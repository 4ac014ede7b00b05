#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "infomap/error.hpp"

namespace infomap {

enum class Frame { Cartesian, Polar };

/// Position in the vehicle frame: x forward, y left, both in meters.
struct WorldPosition {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const WorldPosition&, const WorldPosition&) = default;
};

struct CellIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Geometry of a grid. For Cartesian frames `resolution` is meters per
/// cell and `bearing_resolution` is unused (0). For polar frames rows are
/// range bins of `resolution` meters and columns are bearing bins of
/// `bearing_resolution` radians covering [-pi, pi); the origin cell is kept
/// as metadata but the polar pole is always the frame origin.
struct GridSpec {
  int rows = 1;
  int cols = 1;
  double resolution = 1.0;
  double bearing_resolution = 0.0;
  int origin_row = 0;
  int origin_col = 0;
  Frame frame = Frame::Cartesian;

  static GridSpec cartesian(int rows, int cols, double resolution, int origin_row, int origin_col) {
    return GridSpec{rows, cols, resolution, 0.0, origin_row, origin_col, Frame::Cartesian};
  }

  static GridSpec polar(int rows, int cols, double range_resolution, double bearing_resolution) {
    return GridSpec{rows, cols, range_resolution, bearing_resolution, 0, 0, Frame::Polar};
  }

  std::size_t cell_count() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }

  bool contains(CellIndex c) const { return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols; }

  std::size_t linear(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c.col);
  }

  void validate() const {
    if (rows < 1 || cols < 1)
      throw Error(ErrorCode::InvalidArgument, "grid needs at least one row and one column");
    if (!(resolution > 0.0) || !std::isfinite(resolution))
      throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
    if (frame == Frame::Polar && (!(bearing_resolution > 0.0) || !std::isfinite(bearing_resolution)))
      throw Error(ErrorCode::InvalidArgument, "bearing resolution must be positive");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

namespace detail {

// Index arithmetic happens in 64 bits; anything past 2^53 is certainly
// outside any grid that fits in memory.
inline std::int64_t saturating_index(double q) {
  constexpr double limit = 9007199254740992.0;
  if (std::isnan(q)) return std::numeric_limits<std::int64_t>::min();
  if (q > limit) q = limit;
  if (q < -limit) q = -limit;
  return static_cast<std::int64_t>(q);
}

}  // namespace detail

/// Unbounded cell coordinates of `p`; may lie outside the stored window.
struct RawIndex {
  std::int64_t row = 0;
  std::int64_t col = 0;
};

inline RawIndex world_to_raw_index(const GridSpec& spec, WorldPosition p) {
  if (spec.frame == Frame::Cartesian) {
    const auto dc = detail::saturating_index(std::round(p.x / spec.resolution));
    const auto dr = detail::saturating_index(std::round(p.y / spec.resolution));
    return {static_cast<std::int64_t>(spec.origin_row) - dr, static_cast<std::int64_t>(spec.origin_col) + dc};
  }
  const double range = std::hypot(p.x, p.y);
  const double bearing = std::atan2(p.y, p.x);
  return {detail::saturating_index(std::floor(range / spec.resolution)),
          detail::saturating_index(std::floor((bearing + std::numbers::pi) / spec.bearing_resolution))};
}

inline bool in_grid(const GridSpec& spec, RawIndex r) {
  return r.row >= 0 && r.row < spec.rows && r.col >= 0 && r.col < spec.cols;
}

/// Cell containing `p`, or nullopt when `p` falls outside the grid.
inline std::optional<CellIndex> world_to_cell(const GridSpec& spec, WorldPosition p) {
  const RawIndex raw = world_to_raw_index(spec, p);
  if (!in_grid(spec, raw)) return std::nullopt;
  return CellIndex{static_cast<int>(raw.row), static_cast<int>(raw.col)};
}

/// World position of the center of `cell`; world_to_cell maps it back to `cell`.
inline WorldPosition cell_center(const GridSpec& spec, CellIndex cell) {
  if (spec.frame == Frame::Cartesian) {
    return {static_cast<double>(cell.col - spec.origin_col) * spec.resolution,
            static_cast<double>(spec.origin_row - cell.row) * spec.resolution};
  }
  const double range = (static_cast<double>(cell.row) + 0.5) * spec.resolution;
  const double bearing = (static_cast<double>(cell.col) + 0.5) * spec.bearing_resolution - std::numbers::pi;
  return {range * std::cos(bearing), range * std::sin(bearing)};
}

/// Area of one cell in square meters.
inline double cell_area(const GridSpec& spec, CellIndex cell) {
  if (spec.frame == Frame::Cartesian) return spec.resolution * spec.resolution;
  const double inner = static_cast<double>(cell.row) * spec.resolution;
  const double outer = inner + spec.resolution;
  return 0.5 * (outer * outer - inner * inner) * spec.bearing_resolution;
}

inline std::string to_string(Frame frame) { return frame == Frame::Cartesian ? "cartesian" : "polar"; }

}  // namespace infomap
