#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <tuple>
#include <variant>
#include <vector>

#include "infomap/detection_log.hpp"
#include "infomap/error.hpp"
#include "infomap/grid.hpp"
#include "infomap/information_map.hpp"

namespace infomap {

/// Per-cell detection counters: a truth in the cell is an opportunity, a
/// matched truth is also a hit.
struct CountGrid {
  GridSpec spec;
  std::vector<std::int64_t> hits;
  std::vector<std::int64_t> opportunities;

  explicit CountGrid(const GridSpec& s) : spec(s), hits(s.cell_count(), 0), opportunities(s.cell_count(), 0) {}

  std::int64_t hits_at(CellIndex c) const { return hits.at(spec.linear(c)); }
  std::int64_t opportunities_at(CellIndex c) const { return opportunities.at(spec.linear(c)); }

  /// Counter-wise sum; lets frames be accumulated in parallel chunks.
  CountGrid& operator+=(const CountGrid& other) {
    if (!(spec == other.spec)) throw Error(ErrorCode::SpecMismatch, "count grids differ in geometry");
    for (std::size_t i = 0; i < hits.size(); ++i) {
      hits[i] += other.hits[i];
      opportunities[i] += other.opportunities[i];
    }
    return *this;
  }
};

/// Greedy nearest-first one-to-one matching within `radius`.
///
/// Returns, per truth, the index of its detection (if any). Pairs are taken
/// in order of increasing distance; equal distances go to the smaller
/// detection index, then the smaller truth index.
inline std::vector<std::optional<std::size_t>> match_detections(std::span<const WorldPosition> truths,
                                                                 std::span<const WorldPosition> detections,
                                                                 double radius) {
  struct Pair {
    double distance;
    std::size_t det;
    std::size_t truth;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < truths.size(); ++t) {
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double dist = std::hypot(truths[t].x - detections[d].x, truths[t].y - detections[d].y);
      if (dist <= radius) pairs.push_back({dist, d, t});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.distance, a.det, a.truth) < std::tie(b.distance, b.det, b.truth);
  });
  std::vector<std::optional<std::size_t>> match(truths.size());
  std::vector<bool> det_used(detections.size(), false);
  for (const auto& p : pairs) {
    if (match[p.truth] || det_used[p.det]) continue;
    match[p.truth] = p.det;
    det_used[p.det] = true;
  }
  return match;
}

inline CountGrid accumulate(const DetectionLog& log, const GridSpec& spec, double match_radius) {
  if (log.frames.empty()) throw Error(ErrorCode::EmptyLog, "detection log has no frames");
  if (!(match_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "match radius must be positive");
  spec.validate();
  CountGrid counts(spec);
  for (const auto& frame : log.frames) {
    const auto match = match_detections(frame.truths, frame.detections, match_radius);
    for (std::size_t t = 0; t < frame.truths.size(); ++t) {
      const auto cell = world_to_cell(spec, frame.truths[t]);
      if (!cell) continue;
      const auto i = spec.linear(*cell);
      ++counts.opportunities[i];
      if (match[t]) ++counts.hits[i];
    }
  }
  return counts;
}

inline constexpr std::int64_t kDefaultMinOpportunities = 20;

/// hits/opportunities per cell; cells with too few opportunities are unknown.
inline InformationMap estimate_pd(const CountGrid& counts, std::int64_t min_opportunities = kDefaultMinOpportunities) {
  if (min_opportunities < 1) throw Error(ErrorCode::InvalidArgument, "min_opportunities must be at least 1");
  std::vector<double> values(counts.spec.cell_count(), kUnknown);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (counts.opportunities[i] >= min_opportunities)
      values[i] = static_cast<double>(counts.hits[i]) / static_cast<double>(counts.opportunities[i]);
  }
  return InformationMap(counts.spec, std::move(values), 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
}

/// Unmatched detections per frame in each cell. The value range tops out at
/// the largest observed rate (1 when there is no clutter at all).
inline InformationMap estimate_clutter(const DetectionLog& log, const GridSpec& spec, double match_radius) {
  if (log.frames.empty()) throw Error(ErrorCode::EmptyLog, "detection log has no frames");
  if (!(match_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "match radius must be positive");
  spec.validate();
  std::vector<std::int64_t> unmatched(spec.cell_count(), 0);
  for (const auto& frame : log.frames) {
    const auto match = match_detections(frame.truths, frame.detections, match_radius);
    std::vector<bool> used(frame.detections.size(), false);
    for (const auto& m : match)
      if (m) used[*m] = true;
    for (std::size_t d = 0; d < frame.detections.size(); ++d) {
      if (used[d]) continue;
      if (const auto cell = world_to_cell(spec, frame.detections[d])) ++unmatched[spec.linear(*cell)];
    }
  }
  const double frames = static_cast<double>(log.frames.size());
  std::vector<double> values(spec.cell_count());
  double peak = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<double>(unmatched[i]) / frames;
    peak = std::max(peak, values[i]);
  }
  return InformationMap(spec, std::move(values), 0.0, peak > 0.0 ? peak : 1.0, OobPolicy::DefaultValue, 0.0);
}

struct FillNearest {};
struct FillConstant {
  double value = 0.0;
};
using FillMode = std::variant<FillNearest, FillConstant>;

/// Replaces unknown cells. Nearest uses Euclidean distance in cell units;
/// ties go to the smaller row, then the smaller column.
inline InformationMap fill_unknown(const InformationMap& map, FillMode mode) {
  InformationMap out = map;
  const int rows = map.rows();
  const int cols = map.cols();
  if (const auto* constant = std::get_if<FillConstant>(&mode)) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (is_unknown(map.at(r, c))) out.set(r, c, constant->value);
    return out;
  }
  if (map.known_count() == 0) throw Error(ErrorCode::AllUnknown, "nearest fill needs at least one known cell");
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!is_unknown(map.at(r, c))) continue;
      std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
      CellIndex best{};
      // Square rings of growing radius k; a ring can only hold cells at
      // distance >= k, so stop once k^2 exceeds the best squared distance.
      for (int k = 1;; ++k) {
        if (static_cast<std::int64_t>(k) * k > best_d2) break;
        for (int rr = std::max(0, r - k); rr <= std::min(rows - 1, r + k); ++rr) {
          const bool edge_row = (rr == r - k || rr == r + k);
          const int step = edge_row ? 1 : 2 * k;
          for (int cc = c - k; cc <= c + k; cc += step) {
            if (cc < 0 || cc >= cols) continue;
            if (is_unknown(map.at(rr, cc))) continue;
            const std::int64_t d2 = static_cast<std::int64_t>(rr - r) * (rr - r) + static_cast<std::int64_t>(cc - c) * (cc - c);
            if (d2 < best_d2 || (d2 == best_d2 && std::tie(rr, cc) < std::tie(best.row, best.col))) {
              best_d2 = d2;
              best = {rr, cc};
            }
          }
        }
        if (r - k <= 0 && c - k <= 0 && r + k >= rows - 1 && c + k >= cols - 1) break;
      }
      out.set(r, c, map.at(best));
    }
  }
  return out;
}

/// Box mean over the known cells of a (2k+1)^2 window, clipped at the
/// border. Unknown cells stay unknown and do not contribute.
inline InformationMap smooth(const InformationMap& map, int kernel_radius) {
  if (kernel_radius < 0) throw Error(ErrorCode::InvalidArgument, "kernel radius must be non-negative");
  InformationMap out = map;
  if (kernel_radius == 0) return out;
  const int rows = map.rows();
  const int cols = map.cols();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double center = map.at(r, c);
      if (is_unknown(center)) continue;
      // Mean as center + mean deviation, so constant windows stay exact.
      double deviation = 0.0;
      int count = 0;
      for (int rr = std::max(0, r - kernel_radius); rr <= std::min(rows - 1, r + kernel_radius); ++rr) {
        for (int cc = std::max(0, c - kernel_radius); cc <= std::min(cols - 1, c + kernel_radius); ++cc) {
          const double v = map.at(rr, cc);
          if (is_unknown(v)) continue;
          deviation += v - center;
          ++count;
        }
      }
      out.set(r, c, std::clamp(center + deviation / count, map.vmin(), map.vmax()));
    }
  }
  return out;
}

}  // namespace infomap
