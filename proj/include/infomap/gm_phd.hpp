#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infomap/error.hpp"
#include "infomap/grid.hpp"
#include "infomap/hierarchy.hpp"
#include "infomap/information_map.hpp"

namespace infomap::phd {

/// (x, y, vx, vy) in meters and meters per second.
using StateVector = Eigen::Matrix<double, 4, 1>;
using StateMatrix = Eigen::Matrix<double, 4, 4>;
using Measurement = Eigen::Vector2d;
using MeasurementMatrix = Eigen::Matrix2d;
using ObservationMatrix = Eigen::Matrix<double, 2, 4>;

struct GaussianComponent {
  double weight = 0.0;
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();

  WorldPosition position() const { return {mean(0), mean(1)}; }
};

/// The PHD intensity as a weighted sum of Gaussians; its total weight is
/// the expected number of objects.
struct GaussianMixture {
  std::vector<GaussianComponent> components;

  double total_weight() const {
    double sum = 0.0;
    for (const auto& c : components) sum += c.weight;
    return sum;
  }
  std::size_t size() const { return components.size(); }
  bool empty() const { return components.empty(); }
};

struct MotionModel {
  StateMatrix transition = StateMatrix::Identity();
  StateMatrix process_noise = StateMatrix::Zero();

  /// Constant velocity with white-noise acceleration of spectral density
  /// `q_scale` (m^2/s^3 discretized as G G^T q).
  static MotionModel constant_velocity(double dt, double q_scale) {
    MotionModel m;
    m.transition(0, 2) = dt;
    m.transition(1, 3) = dt;
    Eigen::Matrix<double, 4, 2> g = Eigen::Matrix<double, 4, 2>::Zero();
    g(0, 0) = 0.5 * dt * dt;
    g(1, 1) = 0.5 * dt * dt;
    g(2, 0) = dt;
    g(3, 1) = dt;
    m.process_noise = q_scale * g * g.transpose();
    return m;
  }
};

struct SensorModel {
  ObservationMatrix observation = ObservationMatrix::Zero();
  MeasurementMatrix noise = MeasurementMatrix::Identity();
  /// Area of the field of view in m^2, used for uniform clutter.
  double fov_area = 1.0;

  static SensorModel position_only(double sigma_x, double sigma_y, double fov_area = 1.0) {
    SensorModel s;
    s.observation(0, 0) = 1.0;
    s.observation(1, 1) = 1.0;
    s.noise = MeasurementMatrix::Zero();
    s.noise(0, 0) = sigma_x * sigma_x;
    s.noise(1, 1) = sigma_y * sigma_y;
    s.fov_area = fov_area;
    return s;
  }
};

/// Source of the position-dependent filter parameters.
template <typename P>
concept ParameterModel = requires(const P& p, WorldPosition x) {
  { p.detection(x) } -> std::convertible_to<double>;
  { p.persistence(x) } -> std::convertible_to<double>;
  { p.birth(x) } -> std::convertible_to<double>;
  { p.clutter_intensity(x) } -> std::convertible_to<double>;
};

/// Position-independent parameters, the classic tuning-constant setup.
struct ConstantParameters {
  double pd = 0.9;
  double ps = 0.99;
  double birth_value = 1.0;
  /// Expected false measurements per m^2.
  double clutter = 0.0;

  double detection(WorldPosition) const { return pd; }
  double persistence(WorldPosition) const { return ps; }
  double birth(WorldPosition) const { return birth_value; }
  double clutter_intensity(WorldPosition) const { return clutter; }
};

/// Clutter intensity for a sensor whose `rate` false alarms per scan are
/// spread uniformly over `fov_area`.
inline double uniform_clutter_intensity(double rate, double fov_area) {
  if (!(fov_area > 0.0)) throw Error(ErrorCode::InvalidArgument, "field of view area must be positive");
  return rate / fov_area;
}

struct ParameterNodes {
  std::string pd = "pd";
  std::string ps = "ps";
  std::string birth = "birth";
  std::string clutter = "clutter";
};

/// Values used where a parameter request comes back unknown.
struct Fallbacks {
  double pd = 0.5;
  double ps = 0.99;
  double birth = 0.0;
  /// Clutter rate per cell and scan; defaults to the mean of the known
  /// cells of the clutter node's static map.
  std::optional<double> clutter_rate;
};

/// Parameters answered by hierarchical requests. The clutter node stores a
/// per-cell rate (false alarms per scan and cell) which is divided by the
/// area of the cell containing the measurement.
class MapParameters {
 public:
  MapParameters(const Hierarchy& hierarchy, const ParameterNodes& nodes, Fallbacks fallbacks = {},
                std::optional<GridSpec> clutter_grid = std::nullopt)
      : hierarchy_(&hierarchy),
        pd_(hierarchy.id(nodes.pd)),
        ps_(hierarchy.id(nodes.ps)),
        birth_(hierarchy.id(nodes.birth)),
        clutter_(hierarchy.id(nodes.clutter)),
        fallbacks_(fallbacks) {
    const auto clutter_map = hierarchy.static_map(nodes.clutter);
    if (clutter_grid) {
      clutter_grid_ = *clutter_grid;
    } else if (clutter_map) {
      clutter_grid_ = clutter_map->spec();
    } else {
      throw Error(ErrorCode::InvalidArgument, "clutter node '" + nodes.clutter +
                                                  "' is not a static map; pass the grid used for its rates");
    }
    if (!fallbacks_.clutter_rate) {
      double sum = 0.0;
      std::size_t n = 0;
      if (clutter_map) {
        for (double v : clutter_map->values())
          if (!is_unknown(v)) {
            sum += v;
            ++n;
          }
      }
      fallbacks_.clutter_rate = n > 0 ? sum / static_cast<double>(n) : 0.0;
    }
  }

  double detection(WorldPosition p) const { return probability(pd_, p, fallbacks_.pd, "detection"); }
  double persistence(WorldPosition p) const { return probability(ps_, p, fallbacks_.ps, "persistence"); }

  double birth(WorldPosition p) const {
    const double v = hierarchy_->request(birth_, p);
    if (is_unknown(v)) return fallbacks_.birth;
    if (v < 0.0) throw Error(ErrorCode::InvalidRange, "negative birth value");
    return v;
  }

  double clutter_intensity(WorldPosition z) const {
    double rate = hierarchy_->request(clutter_, z);
    if (is_unknown(rate)) rate = *fallbacks_.clutter_rate;
    if (rate < 0.0) throw Error(ErrorCode::InvalidRange, "negative clutter rate");
    const RawIndex raw = world_to_raw_index(clutter_grid_, z);
    const CellIndex cell{static_cast<int>(std::clamp<std::int64_t>(raw.row, 0, clutter_grid_.rows - 1)),
                         static_cast<int>(std::clamp<std::int64_t>(raw.col, 0, clutter_grid_.cols - 1))};
    return rate / cell_area(clutter_grid_, cell);
  }

  const Fallbacks& fallbacks() const { return fallbacks_; }

 private:
  double probability(Hierarchy::NodeId node, WorldPosition p, double fallback, const char* what) const {
    const double v = hierarchy_->request(node, p);
    if (is_unknown(v)) return fallback;
    if (v < 0.0 || v > 1.0)
      throw Error(ErrorCode::InvalidRange, std::string(what) + " probability " + std::to_string(v) + " outside [0, 1]");
    return v;
  }

  const Hierarchy* hierarchy_;
  Hierarchy::NodeId pd_;
  Hierarchy::NodeId ps_;
  Hierarchy::NodeId birth_;
  Hierarchy::NodeId clutter_;
  GridSpec clutter_grid_;
  Fallbacks fallbacks_;
};

inline void symmetrize(StateMatrix& m) { m = 0.5 * (m + m.transpose()).eval(); }

/// Prediction: every component is scaled by the persistence probability at
/// its mean and propagated through the motion model; births are appended.
template <ParameterModel Params>
GaussianMixture predict(const GaussianMixture& mix, const MotionModel& motion, const Params& params,
                        const GaussianMixture& births = {}) {
  GaussianMixture out;
  out.components.reserve(mix.size() + births.size());
  for (const auto& c : mix.components) {
    GaussianComponent next;
    next.weight = c.weight * params.persistence(c.position());
    next.mean = motion.transition * c.mean;
    next.covariance = motion.transition * c.covariance * motion.transition.transpose() + motion.process_noise;
    symmetrize(next.covariance);
    out.components.push_back(next);
  }
  for (const auto& b : births.components) {
    if (!std::isfinite(b.weight) || !b.mean.allFinite() || !b.covariance.allFinite())
      throw Error(ErrorCode::InvalidArgument, "birth component is not finite");
    out.components.push_back(b);
  }
  return out;
}

/// Measurement update. Detection probability is taken at each prior
/// component mean; clutter intensity at each measurement. Components whose
/// weight comes out exactly zero are dropped.
template <ParameterModel Params>
GaussianMixture update(const GaussianMixture& mix, std::span<const Measurement> measurements,
                       const SensorModel& sensor, const Params& params) {
  const ObservationMatrix& h = sensor.observation;
  struct Prepared {
    double pd;
    Measurement predicted;
    MeasurementMatrix innovation_inverse;
    double normalizer;
    StateMatrix posterior_covariance;
    Eigen::Matrix<double, 4, 2> gain;
  };
  std::vector<Prepared> prep;
  prep.reserve(mix.size());
  GaussianMixture out;
  for (const auto& c : mix.components) {
    Prepared p;
    p.pd = params.detection(c.position());
    p.predicted = h * c.mean;
    const MeasurementMatrix s = h * c.covariance * h.transpose() + sensor.noise;
    const double det = s.determinant();
    if (!(std::abs(det) > 1e-12) || !std::isfinite(det))
      throw Error(ErrorCode::SingularInnovation, "innovation covariance is singular (det " + std::to_string(det) + ")");
    p.innovation_inverse = s.inverse();
    p.normalizer = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
    p.gain = c.covariance * h.transpose() * p.innovation_inverse;
    p.posterior_covariance = (StateMatrix::Identity() - p.gain * h) * c.covariance;
    symmetrize(p.posterior_covariance);
    prep.push_back(p);

    const double missed = c.weight * (1.0 - p.pd);
    if (missed > 0.0) out.components.push_back({missed, c.mean, c.covariance});
  }

  std::vector<double> numerators(mix.size());
  for (const auto& z : measurements) {
    double denominator = params.clutter_intensity({z(0), z(1)});
    for (std::size_t i = 0; i < mix.size(); ++i) {
      const Measurement d = z - prep[i].predicted;
      const double likelihood = prep[i].normalizer * std::exp(-0.5 * d.dot(prep[i].innovation_inverse * d));
      numerators[i] = mix.components[i].weight * prep[i].pd * likelihood;
      denominator += numerators[i];
    }
    if (!(denominator > 0.0)) continue;
    for (std::size_t i = 0; i < mix.size(); ++i) {
      const double w = numerators[i] / denominator;
      if (!(w > 0.0)) continue;
      out.components.push_back(
          {w, mix.components[i].mean + prep[i].gain * (z - prep[i].predicted), prep[i].posterior_covariance});
    }
  }
  return out;
}

/// One birth component per measurement, weighted by the birth request at
/// the measurement position. Zero-weight components are not created.
template <ParameterModel Params>
GaussianMixture birth_from_measurements(std::span<const Measurement> measurements, const Params& params,
                                        const StateMatrix& base_covariance, double base_weight) {
  if (!(base_weight > 0.0)) throw Error(ErrorCode::InvalidArgument, "base birth weight must be positive");
  GaussianMixture out;
  for (const auto& z : measurements) {
    const double w = base_weight * params.birth({z(0), z(1)});
    if (!(w > 0.0)) continue;
    StateVector mean;
    mean << z(0), z(1), 0.0, 0.0;
    out.components.push_back({w, mean, base_covariance});
  }
  return out;
}

/// Truncates components lighter than `truncate_threshold`, merges every
/// component within Mahalanobis distance `merge_distance` of the heaviest
/// remaining one (moment matching), and keeps at most `max_components`.
inline GaussianMixture prune_merge(const GaussianMixture& mix, double truncate_threshold, double merge_distance,
                                   std::size_t max_components) {
  if (!(truncate_threshold > 0.0) || !(merge_distance > 0.0) || max_components == 0)
    throw Error(ErrorCode::InvalidArgument, "prune/merge thresholds must be positive");
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < mix.size(); ++i)
    if (mix.components[i].weight >= truncate_threshold) remaining.push_back(i);

  std::vector<StateMatrix> inverses(mix.size());
  for (std::size_t i : remaining) inverses[i] = mix.components[i].covariance.inverse();

  GaussianMixture out;
  while (!remaining.empty()) {
    std::size_t heaviest = remaining.front();
    for (std::size_t i : remaining)
      if (mix.components[i].weight > mix.components[heaviest].weight) heaviest = i;
    const StateVector& anchor = mix.components[heaviest].mean;

    std::vector<std::size_t> group;
    std::vector<std::size_t> rest;
    for (std::size_t i : remaining) {
      const StateVector d = mix.components[i].mean - anchor;
      const double d2 = d.dot(inverses[i] * d);
      (std::sqrt(d2) <= merge_distance ? group : rest).push_back(i);
    }
    remaining = std::move(rest);

    if (group.size() == 1) {
      out.components.push_back(mix.components[group.front()]);
      continue;
    }
    GaussianComponent merged;
    merged.weight = 0.0;
    merged.mean = StateVector::Zero();
    for (std::size_t i : group) {
      merged.weight += mix.components[i].weight;
      merged.mean += mix.components[i].weight * mix.components[i].mean;
    }
    merged.mean /= merged.weight;
    merged.covariance = StateMatrix::Zero();
    for (std::size_t i : group) {
      const StateVector d = merged.mean - mix.components[i].mean;
      merged.covariance += mix.components[i].weight * (mix.components[i].covariance + d * d.transpose());
    }
    merged.covariance /= merged.weight;
    symmetrize(merged.covariance);
    out.components.push_back(merged);
  }

  if (out.size() > max_components) {
    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const GaussianComponent& a, const GaussianComponent& b) { return a.weight > b.weight; });
    out.components.resize(max_components);
  }
  return out;
}

struct Extraction {
  std::vector<StateVector> estimates;
  /// Total mixture weight.
  double expected_cardinality = 0.0;
  /// Total weight rounded to the nearest integer.
  long cardinality = 0;
};

inline Extraction extract(const GaussianMixture& mix, double weight_threshold) {
  if (!(weight_threshold > 0.0 && weight_threshold <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "extraction threshold must lie in (0, 1]");
  Extraction out;
  for (const auto& c : mix.components)
    if (c.weight >= weight_threshold) out.estimates.push_back(c.mean);
  out.expected_cardinality = mix.total_weight();
  out.cardinality = std::lround(out.expected_cardinality);
  return out;
}

}  // namespace infomap::phd
