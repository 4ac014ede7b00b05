#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/detection_log.hpp"
#include "infomap/error.hpp"
#include "infomap/grid.hpp"
#include "infomap/information_map.hpp"
#include "infomap/native_format.hpp"
#include "infomap/tracker.hpp"

namespace infomap::sim {

/// Axis-aligned region [x_min, x_max) x [y_min, y_max).
struct Zone {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(WorldPosition p) const { return p.x >= x_min && p.x < x_max && p.y >= y_min && p.y < y_max; }
  double area() const { return (x_max - x_min) * (y_max - y_min); }
  bool empty() const { return !(x_max > x_min) || !(y_max > y_min); }
};

struct SensorSpec {
  enum class Kind { Rect, Radial, Map };
  Kind kind = Kind::Rect;
  /// Rect: detection probability `pd` inside `fov`, 0 elsewhere.
  Zone fov;
  double pd = 0.95;
  /// Radial: pd(r) = clamp(1 - r / max_range, 0, 1).
  double max_range = 50.0;
  /// Map: native map file holding the detection probability.
  std::string map_path;
};

/// A truth moving at constant `speed` along a polyline, starting at t = 0
/// at the first waypoint and vanishing after the last.
struct Trajectory {
  double speed = 1.0;
  std::vector<WorldPosition> waypoints;

  std::optional<WorldPosition> position_at(double t) const {
    double remaining = speed * t;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
      const auto& a = waypoints[i];
      const auto& b = waypoints[i + 1];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (remaining <= len) {
        const double f = len > 0.0 ? remaining / len : 0.0;
        return WorldPosition{a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
      }
      remaining -= len;
    }
    return std::nullopt;
  }
};

/// Declarative description of a simulated run: sensors, truths, clutter,
/// and the tracker settings used by the occlusion experiment.
struct ScenarioConfig {
  int duration = 44;
  double dt = 0.5;
  std::uint64_t seed = 1;
  GridSpec grid = GridSpec::cartesian(81, 201, 0.25, 40, 20);
  std::vector<SensorSpec> sensors;
  std::vector<Zone> occlusions;
  std::vector<Trajectory> trajectories;
  /// Uniformly placed extra truths per scan (for map-building runs).
  int random_truths = 0;
  Zone random_region;
  /// Expected false alarms per scan, uniform over `clutter_region`.
  double clutter_rate = 0.0;
  std::optional<Zone> clutter_region;
  /// Standard deviation of the position noise in meters.
  double noise = 0.1;
  double ps_inside = 0.99;
  double ps_occlusion = 0.99;
  double ps_outside = 0.5;
  double ospa_cutoff = 5.0;
  double ospa_order = 2.0;
  /// Components within this distance of the first truth count towards its
  /// track weight.
  double survival_gate = 3.0;
  phd::FilterConfig filter;
  std::filesystem::path base_dir;

  /// World extent of `grid` (cell centers plus half a cell).
  Zone grid_extent() const {
    const auto a = cell_center(grid, {grid.rows - 1, 0});
    const auto b = cell_center(grid, {0, grid.cols - 1});
    const double h = 0.5 * grid.resolution;
    return {a.x - h, b.x + h, a.y - h, b.y + h};
  }

  Zone effective_clutter_region() const { return clutter_region.value_or(grid_extent()); }

  /// Two rectangular sensors with a 6 m gap between them and one truth
  /// crossing the gap at 2 m/s, scanned every 0.5 s.
  static ScenarioConfig occlusion_default() {
    ScenarioConfig c;
    c.duration = 44;
    c.dt = 0.5;
    c.seed = 7;
    c.grid = GridSpec::cartesian(81, 201, 0.25, 40, 20);
    SensorSpec left;
    left.fov = {-5.0, 17.0, -8.0, 8.0};
    left.pd = 0.95;
    SensorSpec right;
    right.fov = {23.0, 45.0, -8.0, 8.0};
    right.pd = 0.95;
    c.sensors = {left, right};
    c.occlusions = {{17.0, 23.0, -8.0, 8.0}};
    c.trajectories = {Trajectory{2.0, {{0.5, 0.0}, {40.5, 0.0}}}};
    c.clutter_rate = 1.0;
    c.noise = 0.1;
    c.filter.dt = c.dt;
    c.filter.r_diag = {c.noise * c.noise, c.noise * c.noise};
    c.filter.fov_area = c.grid_extent().area();
    return c;
  }

  /// Throws InvalidConfig naming the offending field.
  void validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
      throw Error(ErrorCode::InvalidConfig, field + ": " + why);
    };
    if (duration < 1) bad("duration", "must be at least 1");
    if (!(dt > 0.0)) bad("dt", "must be positive");
    try {
      grid.validate();
    } catch (const Error& e) {
      bad("grid", e.what());
    }
    for (std::size_t i = 0; i < sensors.size(); ++i) {
      const auto& s = sensors[i];
      const std::string f = "sensor[" + std::to_string(i) + "]";
      if (s.kind == SensorSpec::Kind::Rect) {
        if (s.fov.empty()) bad(f + ".fov", "empty region");
        if (s.pd < 0.0 || s.pd > 1.0) bad(f + ".pd", "must lie in [0, 1]");
      } else if (s.kind == SensorSpec::Kind::Radial) {
        if (!(s.max_range > 0.0)) bad(f + ".max_range", "must be positive");
      } else if (s.map_path.empty()) {
        bad(f + ".map", "missing path");
      }
    }
    for (std::size_t i = 0; i < occlusions.size(); ++i)
      if (occlusions[i].empty()) bad("occlusion[" + std::to_string(i) + "]", "empty region");
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      const std::string f = "trajectory[" + std::to_string(i) + "]";
      if (!(trajectories[i].speed > 0.0)) bad(f + ".speed", "must be positive");
      if (trajectories[i].waypoints.size() < 2) bad(f + ".waypoints", "need at least two");
    }
    if (random_truths < 0) bad("random_truths", "must be non-negative");
    if (random_truths > 0 && random_region.empty()) bad("random_truths.region", "empty region");
    if (clutter_rate < 0.0) bad("clutter", "must be non-negative");
    if (clutter_rate > 0.0 && effective_clutter_region().empty()) bad("clutter_region", "empty region");
    if (noise < 0.0) bad("noise", "must be non-negative");
    for (auto [name, v] : {std::pair{"ps_inside", ps_inside}, std::pair{"ps_occlusion", ps_occlusion},
                           std::pair{"ps_outside", ps_outside}})
      if (v < 0.0 || v > 1.0) bad(name, "must lie in [0, 1]");
    if (!(ospa_cutoff > 0.0)) bad("ospa.cutoff", "must be positive");
    if (!(ospa_order >= 1.0)) bad("ospa.order", "must be at least 1");
    if (!(survival_gate > 0.0)) bad("survival_gate", "must be positive");
  }
};

// Scenario text form, one `key value...` per line:
//
//   duration <scans>            dt <s>              seed <u64>
//   grid <rows> <cols>          res <m>             origin <row> <col>
//   sensor rect <xmin> <xmax> <ymin> <ymax> <pd>
//   sensor radial <max_range>
//   sensor map <path>
//   occlusion <xmin> <xmax> <ymin> <ymax>
//   trajectory <speed> <x,y> <x,y> ...
//   random_truths <n> <xmin> <xmax> <ymin> <ymax>
//   clutter <rate>              clutter_region <xmin> <xmax> <ymin> <ymax>
//   noise <sigma>               ps_inside|ps_occlusion|ps_outside <p>
//   ospa <cutoff> <order>       survival_gate <m>
//
// plus any tracker key (see apply_filter_key). Unless given explicitly,
// the tracker's dt, r_diag and fov_area follow dt, noise and the grid.
inline ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {}) {
  ScenarioConfig c;
  c.sensors.clear();
  c.occlusions.clear();
  c.trajectories.clear();
  c.clutter_rate = 0.0;
  c.base_dir = base_dir;
  bool filter_dt = false, filter_r = false, filter_fov = false;
  int sensor_count = 0, occlusion_count = 0, trajectory_count = 0;

  for (const auto& line : detail::content_lines(text)) {
    const auto tok = detail::split_ws(line.text);
    const std::string_view key = tok[0];
    const std::span<const std::string_view> args(tok.data() + 1, tok.size() - 1);
    auto fail = [&](const std::string& field, const std::string& why) {
      throw Error(ErrorCode::InvalidConfig, field + ": " + why + " (line " + std::to_string(line.number) + ")");
    };
    auto real = [&](std::size_t i, const std::string& field) {
      if (i >= args.size()) fail(field, "missing value");
      const auto v = detail::parse_double(args[i]);
      if (!v || !std::isfinite(*v)) fail(field, "bad number '" + std::string(args[i]) + "'");
      return *v;
    };
    auto integer = [&](std::size_t i, const std::string& field) {
      if (i >= args.size()) fail(field, "missing value");
      const auto v = detail::parse_int<long long>(args[i]);
      if (!v) fail(field, "bad integer '" + std::string(args[i]) + "'");
      return *v;
    };
    auto zone = [&](std::size_t first, const std::string& field) {
      return Zone{real(first, field + ".x_min"), real(first + 1, field + ".x_max"), real(first + 2, field + ".y_min"),
                  real(first + 3, field + ".y_max")};
    };

    if (key == "duration") {
      c.duration = static_cast<int>(integer(0, "duration"));
    } else if (key == "dt") {
      c.dt = real(0, "dt");
    } else if (key == "seed") {
      if (args.empty()) fail("seed", "missing value");
      const auto v = detail::parse_int<std::uint64_t>(args[0]);
      if (!v) fail("seed", "bad unsigned integer");
      c.seed = *v;
    } else if (key == "grid") {
      c.grid.rows = static_cast<int>(integer(0, "grid.rows"));
      c.grid.cols = static_cast<int>(integer(1, "grid.cols"));
    } else if (key == "res") {
      c.grid.resolution = real(0, "res");
    } else if (key == "origin") {
      c.grid.origin_row = static_cast<int>(integer(0, "origin.row"));
      c.grid.origin_col = static_cast<int>(integer(1, "origin.col"));
    } else if (key == "sensor") {
      const std::string f = "sensor[" + std::to_string(sensor_count++) + "]";
      if (args.empty()) fail(f, "missing kind");
      SensorSpec s;
      if (args[0] == "rect") {
        s.kind = SensorSpec::Kind::Rect;
        s.fov = zone(1, f + ".fov");
        s.pd = real(5, f + ".pd");
      } else if (args[0] == "radial") {
        s.kind = SensorSpec::Kind::Radial;
        s.max_range = real(1, f + ".max_range");
      } else if (args[0] == "map") {
        s.kind = SensorSpec::Kind::Map;
        if (args.size() != 2) fail(f + ".map", "expected a path");
        s.map_path = std::string(args[1]);
      } else {
        fail(f + ".kind", "expected rect, radial or map");
      }
      c.sensors.push_back(s);
    } else if (key == "occlusion") {
      c.occlusions.push_back(zone(0, "occlusion[" + std::to_string(occlusion_count++) + "]"));
    } else if (key == "trajectory") {
      const std::string f = "trajectory[" + std::to_string(trajectory_count++) + "]";
      Trajectory t;
      t.speed = real(0, f + ".speed");
      for (std::size_t i = 1; i < args.size(); ++i) {
        const auto xy = detail::split(args[i], ',');
        const auto x = xy.size() == 2 ? detail::parse_double(xy[0]) : std::nullopt;
        const auto y = xy.size() == 2 ? detail::parse_double(xy[1]) : std::nullopt;
        if (!x || !y) fail(f + ".waypoints[" + std::to_string(i - 1) + "]", "expected x,y");
        t.waypoints.push_back({*x, *y});
      }
      c.trajectories.push_back(std::move(t));
    } else if (key == "random_truths") {
      c.random_truths = static_cast<int>(integer(0, "random_truths.count"));
      c.random_region = zone(1, "random_truths.region");
    } else if (key == "clutter") {
      c.clutter_rate = real(0, "clutter");
    } else if (key == "clutter_region") {
      c.clutter_region = zone(0, "clutter_region");
    } else if (key == "noise") {
      c.noise = real(0, "noise");
    } else if (key == "ps_inside") {
      c.ps_inside = real(0, "ps_inside");
    } else if (key == "ps_occlusion") {
      c.ps_occlusion = real(0, "ps_occlusion");
    } else if (key == "ps_outside") {
      c.ps_outside = real(0, "ps_outside");
    } else if (key == "ospa") {
      c.ospa_cutoff = real(0, "ospa.cutoff");
      c.ospa_order = real(1, "ospa.order");
    } else if (key == "survival_gate") {
      c.survival_gate = real(0, "survival_gate");
    } else {
      try {
        if (!phd::apply_filter_key(c.filter, key, args)) fail(std::string(key), "unknown key");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidConfig) throw;
        fail("filter", e.what());
      }
      filter_dt |= key == "dt";
      filter_r |= key == "r_diag";
      filter_fov |= key == "fov_area";
    }
  }
  if (!filter_dt) c.filter.dt = c.dt;
  if (!filter_r) c.filter.r_diag = {std::max(c.noise * c.noise, 1e-6), std::max(c.noise * c.noise, 1e-6)};
  if (!filter_fov && !c.effective_clutter_region().empty()) c.filter.fov_area = c.effective_clutter_region().area();
  c.validate();
  return c;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(detail::read_file(path), path.parent_path());
}

/// Detection-probability map of sensor `index` on the scenario grid, with
/// every occlusion zone forced to 0.
inline InformationMap sensor_pd_map(const ScenarioConfig& config, std::size_t index) {
  const SensorSpec& s = config.sensors.at(index);
  const GridSpec& g = config.grid;
  std::optional<InformationMap> loaded;
  if (s.kind == SensorSpec::Kind::Map) {
    std::filesystem::path p(s.map_path);
    if (p.is_relative()) p = config.base_dir / p;
    loaded = load_native_file(p);
  }
  InformationMap map(g, 0.0, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const WorldPosition p = cell_center(g, {r, c});
      double v = 0.0;
      switch (s.kind) {
        case SensorSpec::Kind::Rect:
          v = s.fov.contains(p) ? s.pd : 0.0;
          break;
        case SensorSpec::Kind::Radial:
          v = std::clamp(1.0 - std::hypot(p.x, p.y) / s.max_range, 0.0, 1.0);
          break;
        case SensorSpec::Kind::Map: {
          const double m = loaded->value_at(p);
          v = is_unknown(m) ? 0.0 : std::clamp(m, 0.0, 1.0);
          break;
        }
      }
      for (const auto& z : config.occlusions)
        if (z.contains(p)) v = 0.0;
      map.set(r, c, v);
    }
  }
  return map;
}

inline bool occluded(const ScenarioConfig& config, WorldPosition p) {
  return std::any_of(config.occlusions.begin(), config.occlusions.end(), [&](const Zone& z) { return z.contains(p); });
}

/// Scan-synchronous simulation. Per scan: trajectory truths (then random
/// truths) are placed; each sensor detects each truth with the probability
/// its pd map gives at the truth; Poisson clutter is added; all detections
/// get Gaussian noise. The same config always yields the same log.
inline DetectionLog generate(const ScenarioConfig& config) {
  config.validate();
  std::vector<InformationMap> pd_maps;
  for (std::size_t i = 0; i < config.sensors.size(); ++i) pd_maps.push_back(sensor_pd_map(config, i));

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Zone clutter_zone = config.effective_clutter_region();

  DetectionLog log;
  log.frames.reserve(static_cast<std::size_t>(config.duration));
  for (int k = 0; k < config.duration; ++k) {
    LogFrame frame;
    frame.timestamp = k * config.dt;
    for (const auto& t : config.trajectories)
      if (auto p = t.position_at(frame.timestamp)) frame.truths.push_back(*p);
    for (int i = 0; i < config.random_truths; ++i) {
      const auto& z = config.random_region;
      const double x = z.x_min + unit(rng) * (z.x_max - z.x_min);
      const double y = z.y_min + unit(rng) * (z.y_max - z.y_min);
      frame.truths.push_back({x, y});
    }
    for (const auto& pd_map : pd_maps) {
      for (const auto& truth : frame.truths) {
        const double pd = pd_map.value_at(truth);
        const double u = unit(rng);
        const double nx = gauss(rng);
        const double ny = gauss(rng);
        if (u < pd) frame.detections.push_back({truth.x + config.noise * nx, truth.y + config.noise * ny});
      }
    }
    if (config.clutter_rate > 0.0) {
      std::poisson_distribution<int> count(config.clutter_rate);
      const int n = count(rng);
      for (int i = 0; i < n; ++i) {
        const double x = clutter_zone.x_min + unit(rng) * (clutter_zone.x_max - clutter_zone.x_min);
        const double y = clutter_zone.y_min + unit(rng) * (clutter_zone.y_max - clutter_zone.y_min);
        frame.detections.push_back({x, y});
      }
    }
    log.frames.push_back(std::move(frame));
  }
  return log;
}

}  // namespace infomap::sim
