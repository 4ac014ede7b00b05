// Acceptance gate. One line per criterion: PASS/FAIL, the measured figure
// and the bound it was held to. Exit status is the number of failures.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "infomap/infomap.hpp"

using namespace infomap;

namespace {

// Pinned tolerances and limits.
constexpr double kRoundTripSeconds = 5.0;
constexpr double kHierarchySeconds = 10.0;
constexpr double kPdSeconds = 30.0;
constexpr double kPdMeanAbsError = 0.05;
constexpr double kPdMaxError = 0.15;
constexpr std::int64_t kPdMinOpportunities = 200;
constexpr double kKalmanStateTol = 1e-9;
constexpr double kKalmanWeightTol = 1e-12;
constexpr double kOcclusionSeconds = 10.0;
constexpr double kOspaTol = 1e-12;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 ---------------------------------------------------------------------

Outcome map_round_trips() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(1, 60);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  int native_failures = 0;
  double worst_excess = -1.0;
  int raster_failures = 0;
  int saturation_mismatches = 0;
  int saturated_maps = 0;
  for (int i = 0; i < 100; ++i) {
    const int rows = dim(rng), cols = dim(rng);
    const bool polar = i % 4 == 3;
    const GridSpec spec = polar ? GridSpec::polar(rows, cols, 0.01 + 3.0 * u(rng), 0.01 + u(rng))
                                : GridSpec::cartesian(rows, cols, 0.01 + 3.0 * u(rng), dim(rng) - 30, dim(rng) - 30);
    const double vmin = -100.0 + 200.0 * u(rng);
    const double vmax = vmin + 1e-3 + 50.0 * u(rng);
    std::vector<double> values(spec.cell_count());
    for (auto& v : values) {
      const double r = u(rng);
      v = r < 0.1 ? kUnknown : r < 0.15 ? vmin : r < 0.2 ? vmax : vmin + (vmax - vmin) * u(rng);
    }
    const auto oob = static_cast<OobPolicy>(i % 3);
    const InformationMap m(spec, values, vmin, vmax, oob, vmin + (vmax - vmin) * u(rng));
    if (!(load_native(save_native(m)) == m)) ++native_failures;

    // import(export(m)) within one quantization step. A map with unknowns
    // whose known cells already cover all 256 levels has no pixel left for
    // the unknown mark; export must refuse exactly those, and the bound is
    // then checked on the same map with unknowns set to vmin.
    std::set<long> levels;
    bool has_unknown = false;
    for (double v : values) {
      if (is_unknown(v)) has_unknown = true;
      else levels.insert(std::lround(std::floor((v - vmin) / (vmax - vmin) * 255.0 + 0.5)));
    }
    const bool saturated = has_unknown && levels.size() == 256;
    std::vector<double> checked = values;
    std::optional<ExportedImage> img;
    try {
      img = export_image(m);
      if (saturated) ++saturation_mismatches;
    } catch (const Error& e) {
      if (!saturated || e.code() != ErrorCode::FormatError) ++saturation_mismatches;
      ++saturated_maps;
      for (auto& v : checked)
        if (is_unknown(v)) v = vmin;
      img = export_image(InformationMap(spec, checked, vmin, vmax, oob, m.oob_default()));
    }
    const auto back = import_image(img->raster, spec, vmin, vmax, oob, std::nullopt, img->unknown_pixel);
    const double step = (vmax - vmin) / 255.0;
    for (std::size_t k = 0; k < checked.size(); ++k) {
      if (is_unknown(checked[k]) != is_unknown(back.values()[k])) {
        worst_excess = std::numeric_limits<double>::infinity();
        continue;
      }
      if (!is_unknown(checked[k])) worst_excess = std::max(worst_excess, std::abs(back.values()[k] - checked[k]) - step);
    }

    // export(import(raster)) is the identity; every pixel value appears.
    Raster raster{rows, cols, std::vector<std::uint8_t>(spec.cell_count())};
    for (std::size_t k = 0; k < raster.pixels.size(); ++k) raster.pixels[k] = static_cast<std::uint8_t>(rng());
    const GridSpec rspec = GridSpec::cartesian(rows, cols, 1.0, 0, 0);
    if (export_image(import_image(raster, rspec, vmin, vmax)).raster.pixels != raster.pixels) ++raster_failures;
  }
  Raster all{16, 16, {}};
  for (int p = 0; p < 256; ++p) all.pixels.push_back(static_cast<std::uint8_t>(p));
  for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{-1e6, 1e6}, std::pair{0.1, 0.3}, std::pair{0.0, 255.0}})
    if (export_image(import_image(all, GridSpec::cartesian(16, 16, 1.0, 0, 0), lo, hi)).raster.pixels != all.pixels)
      ++raster_failures;

  const double secs = seconds_since(t0);
  const bool pass = native_failures == 0 && raster_failures == 0 && saturation_mismatches == 0 && worst_excess <= 0.0 &&
                    secs < kRoundTripSeconds;
  return {pass, "native mismatches " + std::to_string(native_failures) + ", raster mismatches " +
                    std::to_string(raster_failures) + ", saturation mismatches " + std::to_string(saturation_mismatches) +
                    " (" + std::to_string(saturated_maps) + " saturated)" + ", worst |import(export)-m| - step " + fmt("%.3g", worst_excess) +
                    " (<= 0), " + fmt("%.2f", secs) + " s (< 5 s)"};
}

// 2 ---------------------------------------------------------------------

Outcome hierarchy_algebra() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpec spec = GridSpec::cartesian(40, 40, 0.5, 20, 20);
  auto random_map = [&](double unknown_fraction) {
    std::vector<double> v(spec.cell_count());
    for (auto& x : v) x = u(rng) < unknown_fraction ? kUnknown : u(rng);
    return InformationMap(spec, std::move(v), 0.0, 1.0, OobPolicy::NearestCell, 0.0);
  };

  int permutation_mismatches = 0;
  int trials = 0;
  for (auto comb : {Combinator::Product, Combinator::Min, Combinator::Max, Combinator::Mean}) {
    for (int trial = 0; trial < 1000; ++trial, ++trials) {
      const int n = 2 + static_cast<int>(rng() % 7);
      std::vector<InformationMap> children;
      for (int i = 0; i < n; ++i) children.push_back(random_map(0.2));
      const InformationMap own = random_map(0.2);
      std::vector<WorldPosition> probes;
      for (int k = 0; k < 8; ++k) probes.push_back({-12.0 + 24.0 * u(rng), -12.0 + 24.0 * u(rng)});
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> reference;
      for (int perm = 0; perm < 2; ++perm) {
        if (perm == 1) std::shuffle(order.begin(), order.end(), rng);
        Hierarchy h;
        h.add("root", own, comb);
        for (int i : order) {
          const std::string name = "c" + std::to_string(i);
          h.add(name, children[static_cast<std::size_t>(i)]);
          h.link("root", name);
        }
        for (std::size_t k = 0; k < probes.size(); ++k) {
          const double v = h.request("root", probes[k]);
          if (perm == 0) {
            reference.push_back(v);
          } else {
            const bool same = (is_unknown(v) && is_unknown(reference[k])) || v == reference[k];
            if (!same) ++permutation_mismatches;
          }
        }
      }
    }
  }

  // Bake/request consistency on a 200x200 grid through a mixed tree.
  Hierarchy h;
  h.add("root", random_map(0.3), Combinator::Mean);
  h.add("a", random_map(0.3), Combinator::Min);
  h.add("b", random_map(0.3), Combinator::Product);
  h.add("c", random_map(0.3), Combinator::Override);
  h.add("d", random_map(0.5));
  h.add("e", random_map(0.5));
  auto objects = std::make_shared<DynamicObjectMap>(1.0);
  objects->insert("x", {1.0, 2.0}, 3.0, 0.25);
  h.add("objects", MapSource{objects});
  h.link("root", "a");
  h.link("root", "b");
  h.link("a", "c");
  h.link("c", "d");
  h.link("b", "e");
  h.link("b", "objects");
  const GridSpec bake_spec = GridSpec::cartesian(200, 200, 0.13, 97, 103);
  const InformationMap baked = h.bake("root", bake_spec);
  long bake_mismatches = 0;
  for (int r = 0; r < bake_spec.rows; ++r)
    for (int c = 0; c < bake_spec.cols; ++c) {
      const auto p = cell_center(bake_spec, {r, c});
      const double live = h.request("root", p);
      const double b = baked.value_at(p);
      if (!((is_unknown(live) && is_unknown(b)) || live == b)) ++bake_mismatches;
    }

  const double secs = seconds_since(t0);
  const bool pass = permutation_mismatches == 0 && bake_mismatches == 0 && secs < kHierarchySeconds;
  return {pass, std::to_string(trials) + " permutation trials, " + std::to_string(permutation_mismatches) +
                    " mismatches; 200x200 bake, " + std::to_string(bake_mismatches) + " mismatches; " +
                    fmt("%.2f", secs) + " s (< 10 s)"};
}

// 3 ---------------------------------------------------------------------

Outcome pd_estimation() {
  const auto t0 = Clock::now();
  auto true_pd = [](double x, double y) { return std::clamp(1.0 - std::hypot(x, y) / 50.0, 0.0, 1.0); };

  // 5 m evaluation cells tiling x in [2.5, 62.5), y in [-32.5, 27.5).
  const GridSpec coarse = GridSpec::cartesian(12, 12, 5.0, 5, -1);
  sim::ScenarioConfig cfg;
  cfg.grid = GridSpec::cartesian(121, 126, 0.5, 55, 0);
  sim::SensorSpec radial;
  radial.kind = sim::SensorSpec::Kind::Radial;
  radial.max_range = 50.0;
  cfg.sensors = {radial};
  cfg.duration = 2000;
  cfg.random_truths = 50;
  cfg.random_region = {2.5, 62.5, -32.5, 27.5};
  cfg.noise = 0.1;
  cfg.seed = 303;
  const DetectionLog log = sim::generate(cfg);
  const CountGrid counts = accumulate(log, coarse, 1.0);
  const InformationMap pd = estimate_pd(counts, kPdMinOpportunities);

  double sum = 0.0, worst = 0.0;
  int known = 0;
  std::int64_t min_opp = std::numeric_limits<std::int64_t>::max();
  for (int r = 0; r < coarse.rows; ++r)
    for (int c = 0; c < coarse.cols; ++c) {
      const double est = pd.at(r, c);
      if (is_unknown(est)) continue;
      // Cell average of the true profile, 50x50 sub-samples.
      const auto ctr = cell_center(coarse, {r, c});
      double truth = 0.0;
      for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) truth += true_pd(ctr.x - 2.5 + (i + 0.5) * 0.1, ctr.y - 2.5 + (j + 0.5) * 0.1);
      truth /= 2500.0;
      const double err = std::abs(est - truth);
      sum += err;
      worst = std::max(worst, err);
      ++known;
      min_opp = std::min(min_opp, counts.opportunities_at({r, c}));
    }
  const double mae = known > 0 ? sum / known : std::numeric_limits<double>::infinity();
  const double secs = seconds_since(t0);
  const bool pass = known == 144 && min_opp >= kPdMinOpportunities && mae <= kPdMeanAbsError && worst <= kPdMaxError &&
                    secs < kPdSeconds;
  return {pass, std::to_string(known) + "/144 cells known (min " + std::to_string(min_opp) +
                    " opportunities), MAE " + fmt("%.4f", mae) + " (<= 0.05), max " + fmt("%.4f", worst) +
                    " (<= 0.15), " + fmt("%.2f", secs) + " s (< 30 s)"};
}

// 4 ---------------------------------------------------------------------

Outcome kalman_equivalence() {
  phd::FilterConfig fc;
  fc.dt = 0.5;
  fc.q_scale = 0.3;
  fc.r_diag = {0.04, 0.09};
  phd::Tracker<phd::ConstantParameters> tracker(fc, phd::ConstantParameters{1.0, 1.0, 0.0, 0.0});
  phd::GaussianComponent init;
  init.weight = 1.0;
  init.mean << 0.0, 0.0, 1.0, 0.5;
  init.covariance = phd::StateMatrix::Identity() * 2.0;
  tracker.mixture().components = {init};

  // Independent oracle: dynamic-size matrices, information-form update.
  const double dt = fc.dt;
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(4, 4);
  f(0, 2) = f(1, 3) = dt;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(4, 4);
  const double a = dt * dt * dt * dt / 4.0, b = dt * dt * dt / 2.0, c = dt * dt;
  q(0, 0) = q(1, 1) = a;
  q(0, 2) = q(2, 0) = q(1, 3) = q(3, 1) = b;
  q(2, 2) = q(3, 3) = c;
  q *= fc.q_scale;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 4);
  h(0, 0) = h(1, 1) = 1.0;
  Eigen::MatrixXd rinv = Eigen::MatrixXd::Zero(2, 2);
  rinv(0, 0) = 1.0 / fc.r_diag[0];
  rinv(1, 1) = 1.0 / fc.r_diag[1];
  Eigen::VectorXd x = init.mean;
  Eigen::MatrixXd p = init.covariance;

  std::mt19937_64 rng(404);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d truth(0.0, 0.0, 1.0, 0.5);
  double worst_state = 0.0, worst_weight = 0.0;
  bool single = true;
  for (int k = 0; k < 100; ++k) {
    truth.head<2>() += dt * truth.tail<2>();
    const phd::Measurement z(truth(0) + 0.2 * n(rng), truth(1) + 0.3 * n(rng));
    tracker.step(std::vector<phd::Measurement>{z});

    x = f * x;
    p = f * p * f.transpose() + q;
    const Eigen::MatrixXd post = (p.inverse() + h.transpose() * rinv * h).inverse();
    x = x + post * h.transpose() * rinv * (Eigen::VectorXd(z) - h * x);
    p = post;

    const auto& mix = tracker.mixture();
    if (mix.size() != 1) {
      single = false;
      break;
    }
    const auto& comp = mix.components[0];
    worst_state = std::max({worst_state, (comp.mean - x).cwiseAbs().maxCoeff(), (comp.covariance - p).cwiseAbs().maxCoeff()});
    worst_weight = std::max(worst_weight, std::abs(comp.weight - 1.0));
  }
  const bool pass = single && worst_state <= kKalmanStateTol && worst_weight <= kKalmanWeightTol;
  return {pass, std::string(single ? "" : "mixture grew beyond one component; ") + "100 scans, max state/cov error " +
                    fmt("%.3g", worst_state) + " (<= 1e-9), max |w-1| " + fmt("%.3g", worst_weight) + " (<= 1e-12)"};
}

// 5 ---------------------------------------------------------------------

Outcome map_vs_constant() {
  const double pd = 0.9, ps = 0.95, birth = 0.5, kappa = 0.0078125;
  // Cell area 0.25 m^2, so the per-cell rate divides back to kappa exactly.
  const GridSpec spec = GridSpec::cartesian(161, 161, 0.5, 80, 80);
  auto uniform = [&](double v) { return InformationMap(spec, v, 0.0, 1.0, OobPolicy::NearestCell, 0.0); };
  Hierarchy h;
  h.add("pd", uniform(pd));
  h.add("ps", uniform(ps));
  h.add("birth", uniform(birth));
  h.add("clutter", uniform(kappa * cell_area(spec, {0, 0})));

  phd::FilterConfig fc;
  fc.birth_weight = 0.2;
  phd::Tracker<phd::ConstantParameters> scalar(fc, phd::ConstantParameters{pd, ps, birth, kappa});
  phd::Tracker<phd::MapParameters> mapped(fc, phd::MapParameters(h, {}));

  sim::ScenarioConfig cfg;
  cfg.grid = spec;
  sim::SensorSpec s;
  s.fov = {-40.0, 40.0, -40.0, 40.0};
  s.pd = pd;
  cfg.sensors = {s};
  cfg.trajectories = {sim::Trajectory{2.0, {{-20.0, -10.0}, {25.0, 10.0}}},
                      sim::Trajectory{1.5, {{10.0, 20.0}, {10.0, -20.0}}},
                      sim::Trajectory{1.0, {{-15.0, 15.0}, {15.0, 15.0}}}};
  cfg.duration = 50;
  cfg.clutter_rate = 5.0;
  cfg.seed = 505;
  const DetectionLog log = sim::generate(cfg);

  int diverged_at = -1;
  std::size_t max_components = 0;
  for (std::size_t k = 0; k < log.frames.size() && diverged_at < 0; ++k) {
    std::vector<phd::Measurement> z;
    for (const auto& d : log.frames[k].detections) z.emplace_back(d.x, d.y);
    scalar.step(z);
    mapped.step(z);
    const auto& a = scalar.mixture().components;
    const auto& b = mapped.mixture().components;
    max_components = std::max(max_components, a.size());
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].weight == b[i].weight && a[i].mean == b[i].mean && a[i].covariance == b[i].covariance;
    if (!same) diverged_at = static_cast<int>(k);
  }
  const bool pass = diverged_at < 0;
  return {pass, pass ? "50 scans, 3 targets, identical mixtures every scan (up to " + std::to_string(max_components) +
                           " components)"
                     : "mixtures differ at scan " + std::to_string(diverged_at)};
}

// 6 ---------------------------------------------------------------------

Outcome occlusion_experiment() {
  const auto t0 = Clock::now();
  const auto cfg = sim::ScenarioConfig::occlusion_default();
  const auto with = sim::run_occlusion_experiment(cfg, true);
  const auto without = sim::run_occlusion_experiment(cfg, false);
  const bool deterministic = with == sim::run_occlusion_experiment(cfg, true) &&
                             without == sim::run_occlusion_experiment(cfg, false);
  double min_with = std::numeric_limits<double>::infinity();
  for (const auto& s : with.scans)
    if (s.occluded) min_with = std::min(min_with, s.track_weight);
  const double secs = seconds_since(t0);
  const bool pass = with.occluded_scans > 0 && with.survived && !without.survived && deterministic && secs < kOcclusionSeconds;
  return {pass, std::to_string(with.occluded_scans) + " occluded scans; with map survived=" +
                    (with.survived ? "true" : "false") + " (min weight " + fmt("%.3f", min_with) +
                    "), without map survived=" + (without.survived ? "true" : "false") +
                    ", deterministic=" + (deterministic ? "true" : "false") + ", " + fmt("%.2f", secs) + " s (< 10 s)"};
}

// 7 ---------------------------------------------------------------------

Outcome prior_faults() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpec spec = GridSpec::cartesian(30, 40, 0.5, 15, 20);
  int false_pos = 0, false_neg = 0, injected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t classes = 2 + rng() % 4;
    std::vector<std::vector<double>> v(classes, std::vector<double>(spec.cell_count()));
    for (std::size_t cell = 0; cell < spec.cell_count(); ++cell) {
      double rest = 1.0;
      for (std::size_t k = 0; k + 1 < classes; ++k) {
        v[k][cell] = rest * u(rng);
        rest -= v[k][cell];
      }
      v[classes - 1][cell] = rest;
    }
    // Fault: shift one class by a random amount well above the tolerance.
    const std::size_t cell = rng() % spec.cell_count();
    const std::size_t k = rng() % classes;
    const double old = v[k][cell];
    const double magnitude = std::pow(10.0, -5.0 + 4.0 * u(rng));
    const double shifted = old + magnitude <= 1.0 ? old + magnitude : old - magnitude;
    v[k][cell] = shifted;
    const double actual_sum = [&] {
      double s = 0.0;
      for (std::size_t j = 0; j < classes; ++j) s += v[j][cell];
      return s;
    }();
    if (std::abs(actual_sum - 1.0) <= context::kPriorTolerance) continue;  // cannot happen for magnitude >= 1e-5
    ++injected;

    context::ClassPriorSet set;
    for (std::size_t j = 0; j < classes; ++j) {
      set.classes.push_back("class" + std::to_string(j));
      set.maps.emplace_back(spec, v[j], 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
    }
    const auto report = context::validate_priors(set);
    const CellIndex expected{static_cast<int>(cell / static_cast<std::size_t>(spec.cols)),
                             static_cast<int>(cell % static_cast<std::size_t>(spec.cols))};
    bool found = false;
    for (const auto& r : report) {
      if (r.cell == expected) found = true;
      else ++false_pos;
    }
    if (!found) ++false_neg;
  }
  const bool pass = injected == 100 && false_pos == 0 && false_neg == 0;
  return {pass, std::to_string(injected) + " faults injected, " + std::to_string(false_pos) + " false positives, " +
                    std::to_string(false_neg) + " false negatives (tolerance 1e-6)"};
}

// 8 ---------------------------------------------------------------------

double brute_ospa(const std::vector<WorldPosition>& x, const std::vector<WorldPosition>& y, double c, double p) {
  const auto& small = x.size() <= y.size() ? x : y;
  const auto& big = x.size() <= y.size() ? y : x;
  if (big.empty()) return 0.0;
  std::vector<std::size_t> perm(big.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < small.size(); ++i)
      s += std::pow(std::min(c, std::hypot(small[i].x - big[perm[i]].x, small[i].y - big[perm[i]].y)), p);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  best += std::pow(c, p) * static_cast<double>(big.size() - small.size());
  return std::pow(best / static_cast<double>(big.size()), 1.0 / p);
}

Outcome ospa_correctness() {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> card(0, 4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    std::vector<WorldPosition> x(static_cast<std::size_t>(card(rng))), y(static_cast<std::size_t>(card(rng)));
    for (auto& p : x) p = {u(rng), u(rng)};
    for (auto& p : y) p = {u(rng), u(rng)};
    const double c = 1.0 + 0.5 * std::abs(u(rng));
    const double order = 1.0 + static_cast<double>(i % 3);
    worst = std::max(worst, std::abs(ospa(x, y, c, order) - brute_ospa(x, y, c, order)));
  }
  return {worst <= kOspaTol, "500 instances, max |ospa - brute force| " + fmt("%.3g", worst) + " (<= 1e-12)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"map round trips", map_round_trips},
      {"hierarchy algebra", hierarchy_algebra},
      {"pD estimation oracle", pd_estimation},
      {"GM-PHD degenerate Kalman equivalence", kalman_equivalence},
      {"map-vs-constant equivalence", map_vs_constant},
      {"occlusion experiment", occlusion_experiment},
      {"class prior fault injection", prior_faults},
      {"OSPA correctness", ospa_correctness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
