#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "infomap/detection_log.hpp"
#include "infomap/mapbuild.hpp"
#include "infomap/scenario.hpp"

using namespace infomap;

namespace {

const GridSpec kSpec = GridSpec::cartesian(10, 10, 1.0, 5, 5);

DetectionLog one_frame(std::vector<WorldPosition> truths, std::vector<WorldPosition> dets) {
  DetectionLog log;
  log.frames.push_back({0.0, std::move(dets), std::move(truths)});
  return log;
}

}  // namespace

TEST(Accumulate, HitAndMiss) {
  const WorldPosition p{1.0, 2.0};
  const auto cell = *world_to_cell(kSpec, p);
  const auto hit = accumulate(one_frame({p}, {p}), kSpec, 0.5);
  EXPECT_EQ(hit.hits_at(cell), 1);
  EXPECT_EQ(hit.opportunities_at(cell), 1);
  const auto miss = accumulate(one_frame({p}, {}), kSpec, 0.5);
  EXPECT_EQ(miss.hits_at(cell), 0);
  EXPECT_EQ(miss.opportunities_at(cell), 1);
}

TEST(Accumulate, EmptyLogAndSpecMismatch) {
  try {
    accumulate(DetectionLog{}, kSpec, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyLog);
  }
  CountGrid a(kSpec);
  const CountGrid b(GridSpec::cartesian(10, 11, 1.0, 5, 5));
  EXPECT_THROW(a += b, Error);
}

TEST(Accumulate, ChunksSumToWhole) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  DetectionLog log;
  for (int k = 0; k < 50; ++k) {
    LogFrame f{static_cast<double>(k), {}, {}};
    for (int i = 0; i < 5; ++i) {
      const WorldPosition t{u(rng), u(rng)};
      f.truths.push_back(t);
      if (u(rng) > 0) f.detections.push_back({t.x + 0.01, t.y});
    }
    log.frames.push_back(f);
  }
  DetectionLog first, second;
  first.frames.assign(log.frames.begin(), log.frames.begin() + 20);
  second.frames.assign(log.frames.begin() + 20, log.frames.end());
  CountGrid parts = accumulate(first, kSpec, 0.5);
  parts += accumulate(second, kSpec, 0.5);
  const CountGrid whole = accumulate(log, kSpec, 0.5);
  EXPECT_EQ(parts.hits, whole.hits);
  EXPECT_EQ(parts.opportunities, whole.opportunities);
}

TEST(MatchDetections, OneToOneNearestFirst) {
  const std::vector<WorldPosition> truths{{0.0, 0.0}, {1.0, 0.0}};
  const std::vector<WorldPosition> dets{{0.9, 0.0}};
  const auto m = match_detections(truths, dets, 2.0);
  EXPECT_FALSE(m[0]);
  ASSERT_TRUE(m[1]);
  EXPECT_EQ(*m[1], 0u);
}

TEST(EstimatePd, RatioAndThreshold) {
  CountGrid c(kSpec);
  c.hits[0] = 8;
  c.opportunities[0] = 10;
  c.opportunities[1] = 3;
  const auto m = estimate_pd(c, 5);
  EXPECT_DOUBLE_EQ(m.values()[0], 0.8);
  EXPECT_TRUE(is_unknown(m.values()[1]));
  EXPECT_TRUE(is_unknown(m.values()[2]));
}

TEST(EstimatePd, ConvergesToRadialProfile) {
  // Random truths under pd(r) = clamp(1 - r/50); estimates must sit inside
  // a 5-sigma binomial band around the cell-averaged true pd.
  sim::ScenarioConfig cfg;
  cfg.sensors = {sim::SensorSpec{sim::SensorSpec::Kind::Radial, {}, 0.0, 50.0, ""}};
  cfg.grid = GridSpec::cartesian(121, 131, 0.5, 70, 0);
  cfg.duration = 2000;
  cfg.random_truths = 40;
  cfg.random_region = {5.0, 65.0, -25.0, 35.0};
  cfg.noise = 0.05;
  cfg.seed = 3;
  const auto log = sim::generate(cfg);
  const GridSpec coarse = GridSpec::cartesian(6, 6, 10.0, 3, -1);
  const auto pd = estimate_pd(accumulate(log, coarse, 0.5), 100);
  int known = 0;
  for (int r = 0; r < coarse.rows; ++r)
    for (int c = 0; c < coarse.cols; ++c) {
      const double v = pd.at(r, c);
      if (is_unknown(v)) continue;
      ++known;
      const auto ctr = cell_center(coarse, {r, c});
      double truth = 0.0;
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
          truth += std::clamp(1.0 - std::hypot(ctr.x - 5.0 + (i + 0.5) * 0.5, ctr.y - 5.0 + (j + 0.5) * 0.5) / 50.0,
                              0.0, 1.0);
      truth /= 400.0;
      EXPECT_NEAR(v, truth, 0.06) << r << "," << c;
    }
  EXPECT_GT(known, 20);
}

TEST(EstimateClutter, NoClutterIsZero) {
  const auto m = estimate_clutter(one_frame({{0.0, 0.0}}, {{0.0, 0.1}}), kSpec, 0.5);
  for (double v : m.values()) EXPECT_EQ(v, 0.0);
}

TEST(EstimateClutter, UniformRateMatchesPoissonThinning) {
  sim::ScenarioConfig cfg;
  cfg.grid = GridSpec::cartesian(10, 10, 1.0, 5, 5);
  cfg.duration = 4000;
  cfg.clutter_rate = 5.0;
  cfg.clutter_region = sim::Zone{-5.5, 4.5, -4.5, 5.5};
  cfg.seed = 4;
  const auto log = sim::generate(cfg);
  const auto m = estimate_clutter(log, cfg.grid, 0.5);
  const double expected = 5.0 * 1.0 / 100.0;
  double sum = 0.0;
  for (double v : m.values()) {
    EXPECT_NEAR(v, expected, 6.0 * std::sqrt(expected / 4000.0));
    sum += v;
  }
  EXPECT_NEAR(sum, 5.0, 0.15);
}

TEST(EstimateClutter, HotCellIsMaximal) {
  DetectionLog log;
  for (int k = 0; k < 10; ++k) log.frames.push_back({double(k), {{2.0, 2.0}, {2.1, 1.9}, {-3.0, 0.0}}, {}});
  const auto m = estimate_clutter(log, kSpec, 0.5);
  const double hot = m.value_at({2.0, 2.0});
  for (int r = 0; r < kSpec.rows; ++r)
    for (int c = 0; c < kSpec.cols; ++c)
      if (CellIndex{r, c} != *world_to_cell(kSpec, {2.0, 2.0})) {
        EXPECT_LT(m.at(r, c), hot);
      }
}

TEST(FillUnknown, SingleKnownCell) {
  InformationMap m(kSpec, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  m.set(3, 4, 0.6);
  const auto filled = fill_unknown(m, FillNearest{});
  for (double v : filled.values()) EXPECT_EQ(v, 0.6);
}

TEST(FillUnknown, Constant) {
  InformationMap m(kSpec, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  m.set(1, 1, 0.3);
  const auto f = fill_unknown(m, FillConstant{0.0});
  EXPECT_EQ(f.at(1, 1), 0.3);
  EXPECT_EQ(f.at(0, 0), 0.0);
  EXPECT_EQ(f.known_count(), kSpec.cell_count());
}

TEST(FillUnknown, AllUnknown) {
  const InformationMap m(kSpec, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  EXPECT_THROW(fill_unknown(m, FillNearest{}), Error);
}

TEST(FillUnknown, MatchesBruteForceNearest) {
  // Checkerboard plus a random pattern, each against an exhaustive scan.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int pattern = 0; pattern < 2; ++pattern) {
    const GridSpec spec = GridSpec::cartesian(13, 17, 1.0, 0, 0);
    InformationMap m(spec, kUnknown, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c) {
        const bool known = pattern == 0 ? (r + c) % 2 == 0 : u(rng) < 0.1;
        if (known) m.set(r, c, u(rng));
      }
    const auto filled = fill_unknown(m, FillNearest{});
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c) {
        if (!is_unknown(m.at(r, c))) {
          EXPECT_EQ(filled.at(r, c), m.at(r, c));
          continue;
        }
        long best = std::numeric_limits<long>::max();
        double expect = 0.0;
        for (int rr = 0; rr < spec.rows; ++rr)
          for (int cc = 0; cc < spec.cols; ++cc) {
            if (is_unknown(m.at(rr, cc))) continue;
            const long d2 = long(rr - r) * (rr - r) + long(cc - c) * (cc - c);
            if (d2 < best) {
              best = d2;
              expect = m.at(rr, cc);
            }
          }
        EXPECT_EQ(filled.at(r, c), expect) << r << "," << c;
      }
  }
}

TEST(Smooth, IdentityAndUniform) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(kSpec.cell_count());
  for (auto& x : v) x = u(rng);
  const InformationMap m(kSpec, v, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  EXPECT_EQ(smooth(m, 0), m);
  const InformationMap flat(kSpec, 0.37, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  EXPECT_EQ(smooth(flat, 2), flat);
}

TEST(Smooth, Impulse) {
  InformationMap m(kSpec, 0.0, 0.0, 1.0, OobPolicy::DefaultValue, 0.0);
  m.set(4, 4, 1.0);
  const auto s = smooth(m, 1);
  for (int r = 0; r < kSpec.rows; ++r)
    for (int c = 0; c < kSpec.cols; ++c) {
      const bool inside = std::abs(r - 4) <= 1 && std::abs(c - 4) <= 1;
      EXPECT_NEAR(s.at(r, c), inside ? 1.0 / 9.0 : 0.0, 1e-15);
    }
}

TEST(DetectionLogFormat, RoundTripAndErrors) {
  DetectionLog log;
  log.frames.push_back({0.0, {{1.25, -2.0}}, {{1.0, -2.0}}});
  log.frames.push_back({0.5, {}, {{0.1, 0.2}}});
  EXPECT_EQ(parse_detection_log(write_detection_log(log)), log);
  EXPECT_THROW(parse_detection_log("det 1 2\n"), Error);
  EXPECT_THROW(parse_detection_log("frame 1\nframe 0.5\n"), Error);
  EXPECT_THROW(parse_detection_log("frame 0\ndet 1\n"), Error);
}
