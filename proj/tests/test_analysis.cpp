#include "overlap/analysis.hpp"
#include "overlap/error.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace overlap;

TEST(Describe, ConstantZeroSeries) {
  const std::vector<double> v(744, 0.0);
  const auto s = describe(std::span<const double>(v));
  EXPECT_EQ(s.count, 744u);
  EXPECT_EQ(*s.mean, 0.0);
  EXPECT_EQ(*s.std, 0.0);
  EXPECT_EQ(*s.min, 0.0);
  EXPECT_EQ(*s.max, 0.0);
}

TEST(Describe, SmallHandExample) {
  const std::vector<double> v{1, 2, 3};
  const auto s = describe(std::span<const double>(v));
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(*s.mean, 2.0);
  EXPECT_DOUBLE_EQ(*s.std, std::sqrt(2.0 / 3.0));
  EXPECT_DOUBLE_EQ(*describe(std::span<const double>(v), StdConvention::Sample).std, 1.0);
  EXPECT_EQ(*s.min, 1.0);
  EXPECT_EQ(*s.max, 3.0);
}

TEST(Describe, EmptyHasOnlyCount) {
  const auto s = describe(std::span<const double>{});
  EXPECT_EQ(s.count, 0u);
  EXPECT_FALSE(s.mean.has_value());
  EXPECT_FALSE(s.max.has_value());
}

TEST(Describe, ExactOnIntegerData) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> d(-1000, 1000);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial * 37);
    for (auto& x : v) x = d(rng);
    const auto want = oracle::naive_moments(v);
    const auto got = describe(testutil::vec(v));
    EXPECT_EQ(got.count, want.count);
    EXPECT_EQ(*got.mean, want.mean);
    EXPECT_EQ(*got.min, *std::min_element(v.begin(), v.end()));
    EXPECT_EQ(*got.max, *std::max_element(v.begin(), v.end()));
    EXPECT_NEAR(*got.std, std::sqrt(want.var), 1e-12 * (1 + std::sqrt(want.var)));
  }
}

TEST(Describe, CompensatedOnLargeOffsetData) {
  // A large offset with small spread defeats naive single-pass variance.
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(1'000'000);
  long double sum = 0.0L;
  for (auto& x : v) {
    x = 6.5e7 + u(rng);
    sum += x;
  }
  const long double mean = sum / v.size();
  long double sq = 0.0L;
  for (double x : v) sq += (x - mean) * (x - mean);
  const double want_std = static_cast<double>(std::sqrt(sq / v.size()));
  const auto got = describe(std::span<const double>(v));
  EXPECT_NEAR(*got.mean, static_cast<double>(mean), 1e-12 * 6.5e7);
  EXPECT_NEAR(*got.std, want_std, 1e-9 * want_std + 1e-9);
}

TEST(PercentChange, HandCounts) {
  EXPECT_NEAR(percent_change(94, 832), 785.1, 0.05);
  EXPECT_NEAR(percent_change(804, 2269), 182.2, 0.05);
  EXPECT_EQ(percent_change(100, 100), 0.0);
  try {
    percent_change(0, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedBaseline);
  }
}

TEST(PercentChange, MonotoneInMerged) {
  for (std::int64_t base : {1, 7, 94, 804}) {
    double prev = percent_change(base, 0);
    for (std::int64_t m = 1; m < 3000; m += 13) {
      const double cur = percent_change(base, m);
      EXPECT_GT(cur, prev);
      prev = cur;
    }
  }
}

TEST(CoverageRatio, Cases) {
  const auto undefined = coverage_ratio(0, 94);
  EXPECT_FALSE(undefined.defined());
  EXPECT_EQ(undefined.missed, 94);
  EXPECT_EQ(*coverage_ratio(5, 10).ratio, 2.0);
  EXPECT_EQ(*coverage_ratio(0, 0).ratio, 1.0);
}

TEST(CompareCounts, HandRows) {
  const auto ra = compare_counts(DetectorKind::RollingAverage, 0, 94, 832);
  ASSERT_TRUE(ra.percent_change.has_value());
  EXPECT_NEAR(*ra.percent_change, 785.1, 0.05);
  EXPECT_FALSE(ra.ratio.defined());
  EXPECT_EQ(ra.ratio.missed, 94);
  EXPECT_FALSE(ra.merge_loss);

  const auto ls = compare_counts(DetectorKind::LevelShift, 0, 6, 4);
  EXPECT_TRUE(ls.merge_loss);

  const auto zero = compare_counts(DetectorKind::AutoRegression, 0, 0, 0);
  EXPECT_FALSE(zero.percent_change.has_value());
  EXPECT_EQ(*zero.ratio.ratio, 1.0);
  EXPECT_FALSE(zero.merge_loss);
}

TEST(BuildReport, AggregatesCountsInReportOrder) {
  MatchResult pair;
  pair.ion_id = {SystemTag::Ion, "ION-5-139"};
  pair.hist_id = {SystemTag::Hist, "HIST-40-S"};
  pair.rank = 2;
  pair.distance = 1.5;
  PairDetections d;
  const auto with = [](std::size_t n) {
    AnomalySet s;
    for (std::size_t k = 0; k < n; ++k) {
      s.flagged.push_back(static_cast<Index>(k));
      s.scores.push_back(1.0);
    }
    return s;
  };
  d.hist = {with(94), with(276), with(6)};
  d.merged = {with(832), with(274), with(4)};
  const auto report = build_report(pair, d);
  EXPECT_EQ(report.ion_name, "ION-5-139");
  EXPECT_EQ(report.rank, 2u);
  EXPECT_EQ(report.detectors[0].kind, DetectorKind::RollingAverage);
  EXPECT_EQ(report.detectors[0].merged, 832);
  EXPECT_TRUE(report.detectors[1].merge_loss);
  EXPECT_TRUE(report.detectors[2].merge_loss);
  EXPECT_EQ(build_report(pair, d), report);
}
