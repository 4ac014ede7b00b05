#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infomap/error.hpp"
#include "infomap/grid.hpp"

namespace infomap {

/// Sentinel for "no data here". Stored as NaN; test with is_unknown().
inline constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

inline bool is_unknown(double v) { return std::isnan(v); }

/// What value_at does for a position outside the stored window.
enum class OobPolicy { DefaultValue, NearestCell, Error };

inline std::string to_string(OobPolicy p) {
  switch (p) {
    case OobPolicy::DefaultValue: return "default";
    case OobPolicy::NearestCell: return "nearest";
    case OobPolicy::Error: return "error";
  }
  return "default";
}

struct ValueRange {
  double min = 0.0;
  double max = 1.0;

  bool contains(double v) const { return v >= min && v <= max; }
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// A position-dependent parameter stored as a row-major grid.
///
/// Every stored value lies in [vmin, vmax] or is kUnknown. Mutation goes
/// through set(), which enforces that; once handed out as const the map is
/// safe for concurrent readers.
class InformationMap {
 public:
  InformationMap(GridSpec spec, double fill, double vmin, double vmax, OobPolicy oob, double oob_default)
      : spec_(spec), vmin_(vmin), vmax_(vmax), oob_(oob), oob_default_(oob_default) {
    spec_.validate();
    check_range(vmin, vmax, oob_default);
    if (!is_unknown(fill) && !(fill >= vmin && fill <= vmax))
      throw Error(ErrorCode::InvalidFill, "fill " + std::to_string(fill) + " outside value range");
    values_.assign(spec_.cell_count(), fill);
  }

  InformationMap(GridSpec spec, std::vector<double> values, double vmin, double vmax, OobPolicy oob,
                 double oob_default)
      : spec_(spec), values_(std::move(values)), vmin_(vmin), vmax_(vmax), oob_(oob), oob_default_(oob_default) {
    spec_.validate();
    check_range(vmin, vmax, oob_default);
    if (values_.size() != spec_.cell_count())
      throw Error(ErrorCode::DimensionMismatch, "value count " + std::to_string(values_.size()) +
                                                    " does not match grid of " + std::to_string(spec_.cell_count()));
    for (double v : values_) {
      if (!is_unknown(v) && !(v >= vmin_ && v <= vmax_))
        throw Error(ErrorCode::InvalidRange, "stored value " + std::to_string(v) + " outside value range");
    }
  }

  const GridSpec& spec() const { return spec_; }
  int rows() const { return spec_.rows; }
  int cols() const { return spec_.cols; }
  double vmin() const { return vmin_; }
  double vmax() const { return vmax_; }
  ValueRange range() const { return {vmin_, vmax_}; }
  OobPolicy oob_policy() const { return oob_; }
  double oob_default() const { return oob_default_; }
  std::span<const double> values() const { return values_; }

  double at(CellIndex c) const { return values_.at(spec_.linear(checked(c))); }
  double at(int row, int col) const { return at(CellIndex{row, col}); }

  void set(CellIndex c, double v) {
    if (!is_unknown(v) && !(v >= vmin_ && v <= vmax_))
      throw Error(ErrorCode::InvalidRange, "value " + std::to_string(v) + " outside value range");
    values_[spec_.linear(checked(c))] = v;
  }
  void set(int row, int col, double v) { set(CellIndex{row, col}, v); }

  /// Nearest-cell lookup with the out-of-bounds policy applied. Unknown
  /// cells yield kUnknown.
  double value_at(WorldPosition p) const {
    const RawIndex raw = world_to_raw_index(spec_, p);
    if (in_grid(spec_, raw))
      return values_[static_cast<std::size_t>(raw.row) * static_cast<std::size_t>(spec_.cols) +
                     static_cast<std::size_t>(raw.col)];
    switch (oob_) {
      case OobPolicy::DefaultValue:
        return oob_default_;
      case OobPolicy::NearestCell: {
        const auto r = std::clamp<std::int64_t>(raw.row, 0, spec_.rows - 1);
        const auto c = std::clamp<std::int64_t>(raw.col, 0, spec_.cols - 1);
        return values_[static_cast<std::size_t>(r) * static_cast<std::size_t>(spec_.cols) +
                       static_cast<std::size_t>(c)];
      }
      case OobPolicy::Error:
        break;
    }
    throw Error(ErrorCode::OutOfBounds, "position (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                            ") outside the grid");
  }

  std::size_t known_count() const {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return !is_unknown(v); }));
  }

  /// Field-for-field and bit-for-bit equality (unknown cells compare equal).
  friend bool operator==(const InformationMap& a, const InformationMap& b) {
    auto same = [](double x, double y) { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
    if (!(a.spec_ == b.spec_) || a.oob_ != b.oob_ || !same(a.vmin_, b.vmin_) || !same(a.vmax_, b.vmax_) ||
        !same(a.oob_default_, b.oob_default_) || a.values_.size() != b.values_.size())
      return false;
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
      const bool ua = is_unknown(a.values_[i]);
      if (ua != is_unknown(b.values_[i])) return false;
      if (!ua && !same(a.values_[i], b.values_[i])) return false;
    }
    return true;
  }

 private:
  static void check_range(double vmin, double vmax, double oob_default) {
    if (!std::isfinite(vmin) || !std::isfinite(vmax) || !(vmin < vmax))
      throw Error(ErrorCode::InvalidRange, "value range needs vmin < vmax");
    if (!(oob_default >= vmin && oob_default <= vmax))
      throw Error(ErrorCode::InvalidRange, "out-of-bounds default outside value range");
  }

  CellIndex checked(CellIndex c) const {
    if (!spec_.contains(c))
      throw Error(ErrorCode::OutOfBounds,
                  "cell (" + std::to_string(c.row) + ", " + std::to_string(c.col) + ") outside the grid");
    return c;
  }

  GridSpec spec_;
  std::vector<double> values_;
  double vmin_;
  double vmax_;
  OobPolicy oob_;
  double oob_default_;
};

/// Uniform map. The out-of-bounds default is `fill` unless given.
inline InformationMap new_map(const GridSpec& spec, double fill, double vmin, double vmax,
                              OobPolicy oob = OobPolicy::DefaultValue) {
  if (!(vmin < vmax)) throw Error(ErrorCode::InvalidRange, "value range needs vmin < vmax");
  if (!(fill >= vmin && fill <= vmax)) throw Error(ErrorCode::InvalidFill, "fill outside value range");
  return InformationMap(spec, fill, vmin, vmax, oob, fill);
}

inline InformationMap new_map(const GridSpec& spec, double fill, double vmin, double vmax, OobPolicy oob,
                              double oob_default) {
  if (!(vmin < vmax)) throw Error(ErrorCode::InvalidRange, "value range needs vmin < vmax");
  if (!(fill >= vmin && fill <= vmax)) throw Error(ErrorCode::InvalidFill, "fill outside value range");
  return InformationMap(spec, fill, vmin, vmax, oob, oob_default);
}

}  // namespace infomap
