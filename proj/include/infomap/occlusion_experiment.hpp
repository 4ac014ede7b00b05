#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "infomap/detection_log.hpp"
#include "infomap/gm_phd.hpp"
#include "infomap/hierarchy.hpp"
#include "infomap/information_map.hpp"
#include "infomap/ospa.hpp"
#include "infomap/scenario.hpp"
#include "infomap/tracker.hpp"

namespace infomap::sim {

struct ScanReport {
  int scan = 0;
  double time = 0.0;
  std::size_t truths = 0;
  std::size_t estimates = 0;
  double expected_cardinality = 0.0;
  /// Mixture weight within the survival gate of the first truth.
  double track_weight = 0.0;
  double ospa = 0.0;
  double cardinality_error = 0.0;
  bool occluded = false;

  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

struct RunReport {
  bool with_persistence_map = false;
  double ospa_cutoff = 0.0;
  double ospa_order = 0.0;
  std::vector<ScanReport> scans;
  /// True if the first truth kept track weight >= 0.5 on every scan it
  /// spent inside an occlusion.
  bool survived = true;
  std::size_t occluded_scans = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Persistence hierarchy of the scenario:
///
///   occlusion_persistence (product)   ps_occlusion inside occlusions, unknown elsewhere
///   └── fov (max)                     sensor 0: ps_inside where it can detect, unknown elsewhere
///       ├── fov1                      sensor 1, same
///       └── ...
inline Hierarchy persistence_hierarchy(const ScenarioConfig& config) {
  const GridSpec& g = config.grid;
  Hierarchy h;
  std::vector<std::string> fov_names;
  for (std::size_t i = 0; i < config.sensors.size(); ++i) {
    const InformationMap pd = sensor_pd_map(config, i);
    InformationMap fov(g, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < g.cols; ++c)
        if (pd.at(r, c) > 0.0) fov.set(r, c, config.ps_inside);
    fov_names.push_back(i == 0 ? "fov" : "fov" + std::to_string(i));
    h.add(fov_names.back(), std::move(fov), Combinator::Max);
  }
  if (fov_names.empty()) h.add("fov", InformationMap(g, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0));
  for (std::size_t i = 1; i < fov_names.size(); ++i) h.link("fov", fov_names[i]);

  InformationMap occ(g, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c)
      if (occluded(config, cell_center(g, {r, c}))) occ.set(r, c, config.ps_occlusion);
  h.add("occlusion_persistence", std::move(occ), Combinator::Product);
  h.link("occlusion_persistence", "fov");
  return h;
}

/// The static combined persistence map: the baked persistence hierarchy
/// with the occlusion knowledge, or only the sensors' fields of view.
inline InformationMap combined_persistence_map(const ScenarioConfig& config, bool with_occlusion_knowledge) {
  const Hierarchy h = persistence_hierarchy(config);
  BakeOptions opts;
  opts.range = ValueRange{0.0, 1.0};
  opts.oob_default = config.ps_outside;
  return h.bake(with_occlusion_knowledge ? "occlusion_persistence" : "fov", config.grid, opts);
}

/// Tracker parameter hierarchy: pd (max over sensors), ps (baked
/// persistence, unknown falls back to ps_outside), birth (sensor coverage
/// times an object map that suppresses births near current estimates) and
/// a uniform clutter-rate map.
inline Hierarchy tracker_hierarchy(const ScenarioConfig& config, bool with_persistence_map) {
  const GridSpec& g = config.grid;
  Hierarchy h;
  InformationMap coverage(g, 0.0, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  for (std::size_t i = 0; i < config.sensors.size(); ++i) {
    InformationMap pd = sensor_pd_map(config, i);
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < g.cols; ++c)
        if (pd.at(r, c) > 0.0) coverage.set(r, c, 1.0);
    const std::string name = i == 0 ? "pd" : "pd" + std::to_string(i);
    h.add(name, std::move(pd), Combinator::Max);
    if (i > 0) h.link("pd", name);
  }
  if (config.sensors.empty()) h.add("pd", InformationMap(g, 0.0, 0.0, 1.0, OobPolicy::DefaultValue, 0.0));

  h.add("ps", combined_persistence_map(config, with_persistence_map));

  h.add("birth", std::move(coverage), Combinator::Product);
  h.add("objects", MapSource{std::make_shared<DynamicObjectMap>(1.0, ValueRange{0.0, 1.0})});
  h.link("birth", "objects");

  const Zone region = config.effective_clutter_region();
  InformationMap clutter(g, 0.0, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  if (config.clutter_rate > 0.0) {
    double peak = 0.0;
    std::vector<double> rates(g.cell_count(), 0.0);
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < g.cols; ++c) {
        if (!region.contains(cell_center(g, {r, c}))) continue;
        const double v = config.clutter_rate * cell_area(g, {r, c}) / region.area();
        rates[g.linear({r, c})] = v;
        peak = std::max(peak, v);
      }
    clutter = InformationMap(g, std::move(rates), 0.0, std::max(1.0, peak), OobPolicy::DefaultValue, 0.0);
  }
  h.add("clutter", std::move(clutter));
  return h;
}

/// Runs the GM-PHD tracker over the scenario's simulated detections, with
/// either the combined persistence map or the sensors' own coverage as the
/// persistence source. Both runs see the same detections.
inline RunReport run_occlusion_experiment(const ScenarioConfig& config, bool with_persistence_map) {
  config.validate();
  const DetectionLog log = generate(config);
  const Hierarchy h = tracker_hierarchy(config, with_persistence_map);

  phd::FilterConfig fc = config.filter;
  fc.nodes = {"pd", "ps", "birth", "clutter"};
  fc.objects_node = "objects";
  fc.fallbacks.ps = config.ps_outside;
  fc.fallbacks.pd = 0.0;
  fc.fallbacks.birth = 0.0;
  phd::Tracker<phd::MapParameters> tracker(fc, phd::MapParameters(h, fc.nodes, fc.fallbacks),
                                           h.object_map("objects"));

  RunReport report;
  report.with_persistence_map = with_persistence_map;
  report.ospa_cutoff = config.ospa_cutoff;
  report.ospa_order = config.ospa_order;
  for (std::size_t k = 0; k < log.frames.size(); ++k) {
    const LogFrame& frame = log.frames[k];
    std::vector<phd::Measurement> z;
    z.reserve(frame.detections.size());
    for (const auto& d : frame.detections) z.emplace_back(d.x, d.y);
    const phd::ScanResult res = tracker.step(z);

    ScanReport scan;
    scan.scan = static_cast<int>(k);
    scan.time = frame.timestamp;
    scan.truths = frame.truths.size();
    scan.estimates = res.extraction.estimates.size();
    scan.expected_cardinality = res.extraction.expected_cardinality;
    scan.cardinality_error = std::abs(scan.expected_cardinality - static_cast<double>(scan.truths));
    std::vector<WorldPosition> est;
    for (const auto& e : res.extraction.estimates) est.push_back({e(0), e(1)});
    scan.ospa = ospa(est, frame.truths, config.ospa_cutoff, config.ospa_order);

    const auto crossing = config.trajectories.empty() ? std::nullopt
                                                      : config.trajectories.front().position_at(frame.timestamp);
    if (crossing) {
      for (const auto& c : tracker.mixture().components)
        if (std::hypot(c.mean(0) - crossing->x, c.mean(1) - crossing->y) <= config.survival_gate)
          scan.track_weight += c.weight;
      scan.occluded = occluded(config, *crossing);
    }
    if (scan.occluded) {
      ++report.occluded_scans;
      if (scan.track_weight < 0.5) report.survived = false;
    }
    report.scans.push_back(scan);
  }
  return report;
}

inline std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline constexpr const char* kRunReportCsvHeader =
    "scan,time,truths,estimates,expected_cardinality,track_weight,ospa,cardinality_error,occluded";

inline std::string run_report_csv(const RunReport& r) {
  std::string out = std::string(kRunReportCsvHeader) + "\n";
  for (const auto& s : r.scans) {
    out += std::to_string(s.scan) + "," + format_fixed(s.time) + "," + std::to_string(s.truths) + "," +
           std::to_string(s.estimates) + "," + format_fixed(s.expected_cardinality) + "," +
           format_fixed(s.track_weight) + "," + format_fixed(s.ospa) + "," + format_fixed(s.cardinality_error) + "," +
           (s.occluded ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string run_report_text(const RunReport& r) {
  std::string out = "run persistence_map=" + std::string(r.with_persistence_map ? "on" : "off") +
                    " ospa_cutoff=" + format_fixed(r.ospa_cutoff) + " ospa_order=" + format_fixed(r.ospa_order) + "\n";
  for (const auto& s : r.scans) {
    out += "scan " + std::to_string(s.scan) + " t=" + format_fixed(s.time) + " truths=" + std::to_string(s.truths) +
           " estimates=" + std::to_string(s.estimates) + " cardinality=" + format_fixed(s.expected_cardinality) +
           " track_weight=" + format_fixed(s.track_weight) + " ospa=" + format_fixed(s.ospa) +
           (s.occluded ? " occluded" : "") + "\n";
  }
  out += "occluded_scans " + std::to_string(r.occluded_scans) + "\n";
  out += std::string("survived ") + (r.survived ? "true" : "false") + "\n";
  return out;
}

}  // namespace infomap::sim
