// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "overlap/analysis.hpp"
#include "overlap/detectors.hpp"
#include "overlap/dtw.hpp"
#include "overlap/injection.hpp"
#include "overlap/match.hpp"
#include "overlap/merge.hpp"
#include "overlap/pipeline.hpp"
#include "overlap/synth.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace overlap;
using testutil::vec;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass{false};
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// Boundary, monotonicity and continuity, checked step by step.
bool path_ok(const WarpPath& p, Index n, Index m) {
  if (p.empty() || p.front() != WarpStep{0, 0} || p.back() != WarpStep{n - 1, m - 1}) return false;
  for (std::size_t k = 1; k < p.size(); ++k) {
    const Index di = p[k].i - p[k - 1].i;
    const Index dj = p[k].j - p[k - 1].j;
    if (di < 0 || dj < 0 || di > 1 || dj > 1 || di + dj == 0) return false;
  }
  return true;
}

Outcome dtw_oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> len(1, 64);
  int convergence_failures = 0;
  int dominance_failures = 0;
  double worst_convergence = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::uniform_series(rng, len(rng), -10, 10);
    const auto b = oracle::uniform_series(rng, len(rng), -10, 10);
    const double exact = dtw_exact(vec(a), vec(b)).distance;
    const Index full = static_cast<Index>(std::max(a.size(), b.size()));
    const double fast = fastdtw(vec(a), vec(b), full).distance;
    const double rel = exact > 0 ? std::abs(fast - exact) / exact : std::abs(fast - exact);
    worst_convergence = std::max(worst_convergence, rel);
    convergence_failures += rel > 1e-9;
    for (Index r : {0, 1, 2, 4}) dominance_failures += fastdtw(vec(a), vec(b), r).distance < exact;
  }
  double rel_sum = 0.0;
  int rel_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_walk(rng, len(rng), -10, 10);
    const auto b = oracle::random_walk(rng, len(rng), -10, 10);
    const double exact = dtw_exact(vec(a), vec(b)).distance;
    for (Index r : {0, 1, 2, 4}) {
      const double fast = fastdtw(vec(a), vec(b), r).distance;
      dominance_failures += fast < exact;
      if (r == 1 && exact > 0) {
        rel_sum += (fast - exact) / exact;
        ++rel_count;
      }
    }
  }
  const double mean_rel = rel_sum / rel_count;
  const double elapsed = seconds_since(start);
  return {convergence_failures == 0 && dominance_failures == 0 && mean_rel <= 0.20 &&
              elapsed < 10.0,
          "worst full-radius rel err " + fmt(worst_convergence) + ", dominance violations " +
              std::to_string(dominance_failures) + ", radius-1 mean rel err " +
              fmt(100 * mean_rel) + "%, " + fmt(elapsed, 3) + " s"};
}

Outcome warp_path_validity() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> len(1, 120);
  std::uniform_int_distribution<Index> radius(0, 4);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::uniform_series(rng, len(rng), -10, 10);
    const auto b = oracle::uniform_series(rng, len(rng), -10, 10);
    const Index n = vec(a).size();
    const Index m = vec(b).size();
    bad += !path_ok(dtw_exact(vec(a), vec(b)).path, n, m);
    bad += !path_ok(fastdtw(vec(a), vec(b), radius(rng)).path, n, m);
  }
  const double elapsed = seconds_since(start);
  return {bad == 0 && elapsed < 5.0,
          std::to_string(bad) + " invalid of 2000 paths, " + fmt(elapsed, 3) + " s"};
}

Outcome reference_percent_change() {
  const double first = percent_change(94, 832);
  const double second = percent_change(804, 2269);
  return {std::abs(first - 785.1) <= 0.5 && std::abs(second - 182.2) <= 0.5,
          "94 -> 832: " + fmt(first, 5) + "%, 804 -> 2269: " + fmt(second, 5) + "%"};
}

Outcome merge_invariants() {
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::int64_t> t(0, 40);
  std::uniform_int_distribution<int> size(0, 60);
  std::normal_distribution<double> v;
  int bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    TimeSeries ion{{SystemTag::Ion, "I"}, {}};
    TimeSeries hist{{SystemTag::Hist, "H"}, {}};
    for (int k = size(rng); k > 0; --k) ion.samples.push_back({{t(rng)}, v(rng)});
    for (int k = size(rng); k > 0; --k) hist.samples.push_back({{t(rng)}, v(rng)});
    ion = validate_series(ion);
    hist = validate_series(hist);
    const auto m = merge_pair(ion, hist);
    bool ok = m.size() == ion.size() + hist.size() && m.origin.size() == m.size();
    for (std::size_t k = 1; ok && k < m.size(); ++k) {
      ok = m.samples[k - 1].t <= m.samples[k].t;
      if (ok && m.samples[k - 1].t == m.samples[k].t) {
        ok = !(m.origin[k - 1] == Origin::FromHist && m.origin[k] == Origin::FromIon);
      }
    }
    const auto [a, b] = split(m);
    ok = ok && a == ion && b == hist;
    bad += !ok;
  }
  return {bad == 0, std::to_string(bad) + " of 500 pairs violate an invariant"};
}

Outcome detector_zero_sets() {
  int flagged = 0;
  int cases = 0;
  for (std::size_t n : {50u, 500u, 5000u}) {
    for (double slope : {0.0, 1.0, -1.0, 0.37, -12.5, 1e-4, 1e4}) {
      for (double c : {0.0, 100.0, -2048.0, 6.5e7}) {
        std::vector<double> y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = c + slope * static_cast<double>(k);
        flagged += static_cast<int>(detect_rolling_average(vec(y), 10, 3.0).size() +
                                    detect_autoregression(vec(y), 10, 3.0).size() +
                                    detect_level_shift(vec(y), 5, 6.0).size());
        ++cases;
      }
    }
  }
  return {flagged == 0, std::to_string(flagged) + " anomalies over " + std::to_string(cases) +
                            " constant/linear series x 3 detectors"};
}

Outcome detector_oracles() {
  std::mt19937_64 rng(1006);
  double worst_ar = 0.0;
  int ra_mismatch = 0;
  int ls_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = trial % 2 == 0 ? oracle::uniform_series(rng, 500, -100, 100)
                                  : oracle::random_walk(rng, 500, -100, 100);
    const auto ar = testutil::stdvec(fit_ar_predict(vec(y), 10).values);
    const auto ar_want = oracle::ar_residuals(y, 10);
    for (std::size_t k = 0; k < ar.size(); ++k) {
      worst_ar = std::max(worst_ar, std::abs(ar[k] - ar_want[k]));
    }
    ra_mismatch += testutil::stdvec(rolling_average_residuals(vec(y), 10).values) !=
                   oracle::rolling_mean_residuals(y, 10);
    ls_mismatch += testutil::stdvec(level_shift_scores(vec(y), 5).values) !=
                   oracle::two_window_median_scores(y, 5);
  }
  return {worst_ar <= 1e-8 && ra_mismatch == 0 && ls_mismatch == 0,
          "AR max |diff| " + fmt(worst_ar, 3) + ", RA mismatches " + std::to_string(ra_mismatch) +
              ", LS mismatches " + std::to_string(ls_mismatch)};
}

Outcome merging_direction() {
  const auto start = Clock::now();
  SynthConfig c;  // 31 days, HIST every 5 s with 20 spikes, ION hourly and clean
  c.pairs = 1;
  c.extra_hist = 0;
  const auto corpus = make_synthetic_corpus(c);
  const auto& ion = corpus.ion[0];
  const auto& hist = corpus.hist[0];
  const auto merged = merge_pair(ion, hist);
  const auto ra = DetectorParams::rolling_average();
  const auto n_ion = run_detector(ra, ion.values()).size();
  const auto n_hist = run_detector(ra, hist.values()).size();
  const auto n_merged = run_detector(ra, merged.values()).size();
  const double elapsed = seconds_since(start);
  return {n_merged >= n_hist && n_ion == 0 && elapsed < 30.0,
          "RA counts ION " + std::to_string(n_ion) + ", HIST " + std::to_string(n_hist) +
              ", merged " + std::to_string(n_merged) + " (" + std::to_string(hist.size()) +
              " HIST points), " + fmt(elapsed, 3) + " s"};
}

Outcome injection_end_to_end() {
  // Constant 100 at the HIST cadence of 5 s.
  const auto s =
      testutil::regular(SystemTag::Hist, "HIST-C", std::vector<double>(2000, 100.0), 0, 5000);
  const auto inj = inject_zero_run(s, s.samples[1000].t, 7000);
  const auto ls = DetectorParams::level_shift();
  const auto ra = DetectorParams::rolling_average();
  const auto ls_score = evaluate(run_detector(ls, inj.series.values(), "HIST-C"), inj.label,
                                 ls.window_w);
  const auto ra_score = evaluate(run_detector(ra, inj.series.values(), "HIST-C"), inj.label,
                                 ra.window_w);

  bool identical = true;
  std::mt19937_64 rng(1008);
  for (int trial = 0; trial < 20; ++trial) {
    auto values = oracle::random_walk(rng, 1000, 0, 500);
    for (int k = 0; k < 10; ++k) values[(trial * 97 + k * 89) % 1000] += 200.0;
    const auto clean = testutil::regular(SystemTag::Hist, "H", values);
    const auto noisy = inject_gaussian_noise(clean, 100, 0.0, 7 + trial).series;
    for (const auto& p : {ra, DetectorParams::autoregression(), ls}) {
      identical = identical && run_detector(p, clean.values()) == run_detector(p, noisy.values());
    }
  }
  const bool ls_ok = ls_score.recall >= 0.5;
  const bool ra_ok = ra_score.true_positives >= 1;
  return {ls_ok && ra_ok && identical,
          std::to_string(inj.label.indices.size()) + " samples zeroed; LS recall " +
              fmt(ls_score.recall) + (ls_ok ? "" : " (< 0.5)") + ", RA true positives " +
              std::to_string(ra_score.true_positives) + ", sigma-0 outputs " +
              (identical ? "identical" : "DIFFER")};
}

Outcome runtime_monotonicity() {
  // One 500k-point HIST series at 5 s and hourly ION series over the same span.
  const std::int64_t n = 500'000;
  SynthConfig c;
  c.duration_ms = n * c.hist_cadence_ms;
  c.pairs = 16;
  c.extra_hist = 0;
  c.spikes = 20;
  auto corpus = make_synthetic_corpus(c);
  corpus.hist.resize(1);

  MatchOptions opt;
  opt.threads = 1;
  std::vector<double> best;
  std::string detail = "min match seconds";
  for (std::size_t step : {100u, 1000u, 2000u, 5000u}) {
    double t = 1e300;
    for (int rep = 0; rep < 9; ++rep) {
      t = std::min(t, match_all(corpus.ion, corpus.hist, SamplingRecipe::step(step, 4), opt)
                          .elapsed_seconds);
    }
    best.push_back(t);
    detail += " step " + std::to_string(step) + ": " + fmt(t, 3);
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < best.size(); ++k) decreasing = decreasing && best[k] < best[k - 1];
  return {decreasing && corpus.hist[0].size() == static_cast<std::size_t>(n), detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome pipeline_determinism() {
  testutil::TempDir dir;
  SynthConfig c;
  c.duration_ms = 7 * kMillisPerDay;
  cmd_synth(c, dir.path() / "corpus", std::cerr);
  RunConfig cfg;
  cfg.manifest = dir.path() / "corpus" / "manifest.json";
  cfg.recipe = SamplingRecipe::step(10, 1);
  cfg.seed = 42;
  std::ostringstream log;
  cfg.out_dir = dir.path() / "first";
  cmd_pipeline(cfg, log);
  cfg.out_dir = dir.path() / "second";
  cmd_pipeline(cfg, log);
  bool same = true;
  for (const char* f : {"report.json", "matches.csv"}) {
    const auto a = slurp(dir.path() / "first" / f);
    same = same && !a.empty() && a == slurp(dir.path() / "second" / f);
  }
  return {same, same ? "report.json and matches.csv byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"DTW oracle equivalence", dtw_oracle_equivalence},
      {"warp-path validity", warp_path_validity},
      {"reference percent-change arithmetic", reference_percent_change},
      {"merge invariants", merge_invariants},
      {"detector zero-sets", detector_zero_sets},
      {"detector oracles", detector_oracles},
      {"merging direction-of-effect", merging_direction},
      {"injection end-to-end", injection_end_to_end},
      {"sampling run-time monotonicity", runtime_monotonicity},
      {"pipeline determinism", pipeline_determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
