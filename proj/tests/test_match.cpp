#include "overlap/error.hpp"
#include "overlap/match.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace overlap;
using testutil::regular;

namespace {

std::vector<TimeSeries> named(SystemTag tag, const std::vector<std::vector<double>>& values,
                              const std::string& prefix) {
  std::vector<TimeSeries> out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.push_back(regular(tag, prefix + std::to_string(k), values[k]));
  }
  return out;
}

}  // namespace

TEST(MatchAll, SelfMatchIsRankOneAtZero) {
  const std::vector<double> v{1, 5, 2, 8, 3};
  const auto ion = named(SystemTag::Ion, {v}, "ION-");
  const auto hist = named(SystemTag::Hist, {v}, "HIST-");
  const auto run = match_all(ion, hist, SamplingRecipe::passthrough());
  ASSERT_EQ(run.results.size(), 1u);
  EXPECT_EQ(run.results[0].distance, 0.0);
  EXPECT_EQ(run.results[0].rank, 1u);
  EXPECT_GE(run.elapsed_seconds, 0.0);
}

TEST(MatchAll, CrossProductRanked) {
  std::mt19937_64 rng(41);
  const auto ion = named(SystemTag::Ion,
                         {oracle::uniform_series(rng, 30, 0, 1), oracle::uniform_series(rng, 20, 0, 1)},
                         "ION-");
  const auto hist = named(SystemTag::Hist,
                          {oracle::uniform_series(rng, 40, 0, 1), oracle::uniform_series(rng, 50, 0, 1),
                           oracle::uniform_series(rng, 60, 0, 1)},
                          "HIST-");
  const auto run = match_all(ion, hist, SamplingRecipe::passthrough());
  ASSERT_EQ(run.results.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(run.results[k].rank, k + 1);
    if (k > 0) EXPECT_LE(run.results[k - 1].distance, run.results[k].distance);
    EXPECT_EQ(run.results[k].recipe, SamplingRecipe::passthrough());
  }
}

TEST(MatchAll, SubsampledCopyRanksAboveUnrelated) {
  std::mt19937_64 rng(42);
  const auto x = oracle::random_walk(rng, 2000, 0, 100);
  const auto y = oracle::random_walk(rng, 2000, 0, 100);
  std::vector<double> a;
  for (std::size_t k = 0; k < x.size(); k += 20) a.push_back(x[k]);
  const auto ion = std::vector{regular(SystemTag::Ion, "ION-A", a, 0, 100'000)};
  const auto hist = std::vector{regular(SystemTag::Hist, "HIST-X", x),
                                regular(SystemTag::Hist, "HIST-Y", y)};
  const auto run = match_all(ion, hist, SamplingRecipe::step(10, 1));
  EXPECT_EQ(run.results[0].hist_id.name, "HIST-X");
  // The ordering agrees with exact DTW on the same sampled inputs.
  const auto sa = SamplingRecipe::step(10, 1).apply(ion[0]).values();
  const double dx = dtw_exact_distance(sa, sample_step(hist[0], 10).values());
  const double dy = dtw_exact_distance(sa, sample_step(hist[1], 10).values());
  EXPECT_LT(dx, dy);
}

TEST(MatchAll, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(43);
  std::vector<std::vector<double>> iv, hv;
  for (int k = 0; k < 5; ++k) iv.push_back(oracle::random_walk(rng, 80, 0, 10));
  for (int k = 0; k < 7; ++k) hv.push_back(oracle::random_walk(rng, 300, 0, 10));
  // A duplicate gives a distance tie that must be broken by name.
  hv.push_back(hv[0]);
  const auto ion = named(SystemTag::Ion, iv, "ION-");
  const auto hist = named(SystemTag::Hist, hv, "HIST-");
  MatchOptions one;
  one.threads = 1;
  MatchOptions many;
  many.threads = 8;
  const auto a = match_all(ion, hist, SamplingRecipe::step(3, 1), one);
  const auto b = match_all(ion, hist, SamplingRecipe::step(3, 1), many);
  const auto c = match_all(ion, hist, SamplingRecipe::step(3, 1), many);
  ASSERT_EQ(a.results.size(), 40u);
  for (std::size_t k = 0; k < a.results.size(); ++k) {
    EXPECT_EQ(a.results[k].ion_id, b.results[k].ion_id);
    EXPECT_EQ(a.results[k].hist_id, b.results[k].hist_id);
    EXPECT_EQ(a.results[k].distance, b.results[k].distance);
    EXPECT_EQ(b.results[k].hist_id, c.results[k].hist_id);
    if (k > 0 && a.results[k].distance == a.results[k - 1].distance) {
      EXPECT_LT(std::tie(a.results[k - 1].ion_id.name, a.results[k - 1].hist_id.name),
                std::tie(a.results[k].ion_id.name, a.results[k].hist_id.name));
    }
  }
}

TEST(MatchAll, ZNormalizeMatchesShapeNotScale) {
  std::vector<double> base(200);
  for (std::size_t k = 0; k < base.size(); ++k) base[k] = std::sin(0.1 * double(k));
  std::vector<double> scaled(base.size());
  std::vector<double> other(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    scaled[k] = 1000.0 + 500.0 * base[k];
    other[k] = std::cos(0.37 * double(k));
  }
  const auto ion = std::vector{regular(SystemTag::Ion, "ION-A", base)};
  const auto hist = std::vector{regular(SystemTag::Hist, "HIST-S", scaled),
                                regular(SystemTag::Hist, "HIST-O", other)};
  MatchOptions opt;
  opt.z_normalize = true;
  EXPECT_EQ(match_all(ion, hist, SamplingRecipe::passthrough(), opt).results[0].hist_id.name,
            "HIST-S");
  EXPECT_EQ(match_all(ion, hist, SamplingRecipe::passthrough()).results[0].hist_id.name, "HIST-O");
}

TEST(MatchAll, EmptyPartitionRejected) {
  const auto one = std::vector{regular(SystemTag::Ion, "ION-A", {1, 2})};
  try {
    match_all(one, {}, SamplingRecipe::passthrough());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPartition);
  }
  const auto empty_series = std::vector{TimeSeries{{SystemTag::Hist, "HIST-E"}, {}}};
  EXPECT_THROW(match_all(one, empty_series, SamplingRecipe::passthrough()), Error);
}
