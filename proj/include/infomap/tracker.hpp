#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/error.hpp"
#include "infomap/gm_phd.hpp"
#include "infomap/hierarchy.hpp"

namespace infomap::phd {

/// Everything one GM-PHD tracker needs besides its parameter source.
struct FilterConfig {
  double dt = 0.5;
  double q_scale = 0.5;
  /// Measurement noise variances (x, y) in m^2.
  std::array<double, 2> r_diag{0.01, 0.01};
  double truncate = 1e-5;
  double merge = 2.0;
  std::size_t max_components = 100;
  double extract_threshold = 0.5;
  double birth_weight = 0.1;
  std::array<double, 4> birth_cov_diag{0.25, 0.25, 4.0, 4.0};
  double fov_area = 1.0;
  Fallbacks fallbacks;
  ParameterNodes nodes;
  /// Object map refreshed with the current estimates after every scan.
  std::string objects_node = "objects";
  double suppression_radius = 2.0;
  /// Hierarchy config binding the parameter nodes, if loaded from a file.
  std::string hierarchy;

  MotionModel motion() const { return MotionModel::constant_velocity(dt, q_scale); }
  SensorModel sensor() const {
    SensorModel s = SensorModel::position_only(std::sqrt(r_diag[0]), std::sqrt(r_diag[1]), fov_area);
    s.noise(0, 0) = r_diag[0];
    s.noise(1, 1) = r_diag[1];
    return s;
  }
  StateMatrix birth_covariance() const {
    StateMatrix p = StateMatrix::Zero();
    for (int i = 0; i < 4; ++i) p(i, i) = birth_cov_diag[static_cast<std::size_t>(i)];
    return p;
  }
};

/// Applies one `key value...` setting. Returns false if `key` is not a
/// filter key; throws InvalidConfig on a malformed value.
inline bool apply_filter_key(FilterConfig& cfg, std::string_view key, std::span<const std::string_view> args) {
  auto real = [&](std::size_t i) {
    if (i >= args.size()) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": missing value");
    const auto v = detail::parse_double(args[i]);
    if (!v || !std::isfinite(*v)) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": bad number");
    return *v;
  };
  auto positive = [&](std::size_t i) {
    const double v = real(i);
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": must be positive");
    return v;
  };
  auto probability = [&](std::size_t i) {
    const double v = real(i);
    if (v < 0.0 || v > 1.0) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": must lie in [0, 1]");
    return v;
  };
  auto name = [&]() {
    if (args.size() != 1) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": expected one name");
    return std::string(args[0]);
  };

  if (key == "dt") cfg.dt = positive(0);
  else if (key == "q_scale") cfg.q_scale = real(0);
  else if (key == "r_diag") cfg.r_diag = {positive(0), positive(1)};
  else if (key == "truncate") cfg.truncate = positive(0);
  else if (key == "merge") cfg.merge = positive(0);
  else if (key == "max_components") cfg.max_components = static_cast<std::size_t>(positive(0));
  else if (key == "extract") cfg.extract_threshold = probability(0);
  else if (key == "birth_weight") cfg.birth_weight = positive(0);
  else if (key == "birth_cov") cfg.birth_cov_diag = {positive(0), positive(1), positive(2), positive(3)};
  else if (key == "fov_area") cfg.fov_area = positive(0);
  else if (key == "fallback_pd") cfg.fallbacks.pd = probability(0);
  else if (key == "fallback_ps") cfg.fallbacks.ps = probability(0);
  else if (key == "fallback_birth") cfg.fallbacks.birth = real(0);
  else if (key == "fallback_clutter") cfg.fallbacks.clutter_rate = real(0);
  else if (key == "pd_node") cfg.nodes.pd = name();
  else if (key == "ps_node") cfg.nodes.ps = name();
  else if (key == "birth_node") cfg.nodes.birth = name();
  else if (key == "clutter_node") cfg.nodes.clutter = name();
  else if (key == "objects_node") cfg.objects_node = name();
  else if (key == "suppression_radius") cfg.suppression_radius = positive(0);
  else if (key == "hierarchy") cfg.hierarchy = name();
  else return false;
  if (cfg.q_scale < 0.0) throw Error(ErrorCode::InvalidConfig, "q_scale: must be non-negative");
  return true;
}

inline FilterConfig parse_filter_config(std::string_view text) {
  FilterConfig cfg;
  for (const auto& line : detail::content_lines(text)) {
    const auto tok = detail::split_ws(line.text);
    const std::span<const std::string_view> args(tok.data() + 1, tok.size() - 1);
    if (!apply_filter_key(cfg, tok[0], args))
      throw Error(ErrorCode::FormatError, "unknown filter key '" + std::string(tok[0]) + "'", line.offset);
  }
  return cfg;
}

struct ScanResult {
  Extraction extraction;
  std::size_t components = 0;
};

/// Scan loop: predict (with the births proposed by the previous scan),
/// update, prune/merge, extract, then mark the estimates in the object map
/// and propose births from this scan's measurements.
template <ParameterModel Params>
class Tracker {
 public:
  Tracker(FilterConfig config, Params params, std::shared_ptr<DynamicObjectMap> objects = nullptr)
      : config_(std::move(config)),
        params_(std::move(params)),
        objects_(std::move(objects)),
        motion_(config_.motion()),
        sensor_(config_.sensor()) {}

  ScanResult step(std::span<const Measurement> measurements) {
    mixture_ = predict(mixture_, motion_, params_, pending_births_);
    mixture_ = update(mixture_, measurements, sensor_, params_);
    mixture_ = prune_merge(mixture_, config_.truncate, config_.merge, config_.max_components);
    ScanResult result{extract(mixture_, config_.extract_threshold), mixture_.size()};
    if (objects_) {
      objects_->clear();
      for (std::size_t i = 0; i < result.extraction.estimates.size(); ++i) {
        const auto& e = result.extraction.estimates[i];
        objects_->insert("track" + std::to_string(i), {e(0), e(1)}, config_.suppression_radius,
                         objects_->range().min);
      }
    }
    pending_births_ = birth_from_measurements(measurements, params_, config_.birth_covariance(), config_.birth_weight);
    return result;
  }

  const GaussianMixture& mixture() const { return mixture_; }
  GaussianMixture& mixture() { return mixture_; }
  const Params& params() const { return params_; }
  const FilterConfig& config() const { return config_; }

 private:
  FilterConfig config_;
  Params params_;
  std::shared_ptr<DynamicObjectMap> objects_;
  MotionModel motion_;
  SensorModel sensor_;
  GaussianMixture mixture_;
  GaussianMixture pending_births_;
};

}  // namespace infomap::phd
