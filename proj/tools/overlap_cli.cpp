// overlap: discover overlapping ION/HIST measurements, merge them and compare
// anomaly counts.

#include "overlap/error.hpp"
#include "overlap/ingestion.hpp"
#include "overlap/pipeline.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <map>

namespace {

using namespace overlap;

struct Flags {
  std::string manifest;
  std::string recipe{"step"};
  std::size_t hist_step{100};
  std::size_t ion_step{2};
  std::size_t n_points{1000};
  std::string range_start;
  std::string range_end;
  Index radius{1};
  std::string metric{"l2"};
  bool z_normalize{false};
  std::size_t top_n{4};
  unsigned threads{0};
  Index ar_order{10};
  double ar_k{3.0};
  Index ra_window{10};
  double ra_k{3.0};
  Index ls_window{5};
  double ls_k{6.0};
  std::string threshold{"median-iqr"};
  std::uint64_t seed{0};
  std::string out{"."};
};

Timestamp parse_time_flag(const std::string& text) {
  std::int64_t ms = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, ms);
  if (ec == std::errc{} && ptr == end) return Timestamp{ms};
  return parse_iso8601(text);
}

SamplingRecipe build_recipe(const Flags& f) {
  if (f.recipe == "step") return SamplingRecipe::step(f.hist_step, f.ion_step);
  if (f.recipe == "first-n") return SamplingRecipe::first_n(f.n_points);
  if (f.range_start.empty() || f.range_end.empty()) {
    throw Error(ErrorCode::InvalidArgument, "date-range needs --range-start and --range-end");
  }
  return SamplingRecipe::date_range(parse_time_flag(f.range_start), parse_time_flag(f.range_end),
                                    f.hist_step, f.ion_step);
}

RunConfig build_config(const Flags& f) {
  RunConfig c;
  c.manifest = f.manifest;
  c.recipe = build_recipe(f);
  c.match.radius = f.radius;
  c.match.metric = parse_metric(f.metric);
  c.match.z_normalize = f.z_normalize;
  c.match.threads = f.threads;
  const auto rule = f.threshold == "mean-std" ? ThresholdRule::MeanStd : ThresholdRule::MedianIqr;
  c.detectors = {DetectorParams::rolling_average(f.ra_window, f.ra_k),
                 DetectorParams::autoregression(f.ar_order, f.ar_k),
                 DetectorParams::level_shift(f.ls_window, f.ls_k)};
  for (auto& d : c.detectors) d.rule = rule;
  c.top_n = f.top_n;
  c.out_dir = f.out;
  c.seed = f.seed;
  return c;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--manifest", f.manifest, "corpus manifest (JSON)")->required();
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "random seed");
}

void add_matching(CLI::App* cmd, Flags& f) {
  cmd->add_option("--recipe", f.recipe, "sampling recipe")
      ->check(CLI::IsMember({"step", "first-n", "date-range"}));
  cmd->add_option("--hist-step", f.hist_step, "keep every k-th HIST sample");
  cmd->add_option("--ion-step", f.ion_step, "keep every k-th ION sample");
  cmd->add_option("--n-points", f.n_points, "first-n: points per series");
  cmd->add_option("--range-start", f.range_start, "date-range start (epoch ms or ISO-8601)");
  cmd->add_option("--range-end", f.range_end, "date-range end (epoch ms or ISO-8601)");
  cmd->add_option("--radius", f.radius, "FastDTW radius");
  cmd->add_option("--metric", f.metric, "point distance")->check(CLI::IsMember({"l1", "l2"}));
  cmd->add_flag("--z-normalize", f.z_normalize, "z-normalize series before matching");
  cmd->add_option("--top-n", f.top_n, "matches carried into detection");
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
}

void add_detectors(CLI::App* cmd, Flags& f) {
  cmd->add_option("--ar-order", f.ar_order, "AR model order p");
  cmd->add_option("--ar-k", f.ar_k, "AR threshold multiplier");
  cmd->add_option("--ra-window", f.ra_window, "rolling average window");
  cmd->add_option("--ra-k", f.ra_k, "RA threshold multiplier");
  cmd->add_option("--ls-window", f.ls_window, "level shift window");
  cmd->add_option("--ls-k", f.ls_k, "LS threshold multiplier");
  cmd->add_option("--threshold", f.threshold, "outlier rule")
      ->check(CLI::IsMember({"median-iqr", "mean-std"}));
}

void add_injection(CLI::App* cmd, InjectionSpec& spec, std::string& kind) {
  cmd->add_option("--series", spec.series, "series to inject into")->required();
  cmd->add_option("--kind", kind, "zero-run | noise")
      ->check(CLI::IsMember({"zero-run", "noise", "DOS_ZERO_RUN", "GAUSSIAN_NOISE"}));
  cmd->add_option("--at", spec.at_ms, "zero-run start, epoch ms (default: middle sample)");
  cmd->add_option("--duration-ms", spec.duration_ms, "zero-run length (default: 6-8 s)");
  cmd->add_option("--count", spec.count, "noise: samples to perturb");
  cmd->add_option("--sigma", spec.sigma, "noise: standard deviation");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find overlapping ION/HIST measurements and compare anomaly counts"};
  app.require_subcommand(1);

  Flags f;
  InjectionSpec spec;
  std::string kind{"zero-run"};
  std::string series;
  std::string merge_with;
  Index slack = -1;
  SynthConfig synth;
  std::string synth_out{"."};

  auto* ingest = app.add_subcommand("ingest", "load a corpus and summarise it");
  add_common(ingest, f);

  auto* match = app.add_subcommand("match", "rank every ION/HIST pair by DTW distance");
  add_common(match, f);
  add_matching(match, f);

  auto* detect = app.add_subcommand("detect", "run RA, AR and LS on one series or a merged pair");
  add_common(detect, f);
  add_detectors(detect, f);
  detect->add_option("--series", series, "series name")->required();
  detect->add_option("--merge-with", merge_with, "merge with this series first");

  auto* pipeline = app.add_subcommand("pipeline", "match, merge the top pairs and compare");
  add_common(pipeline, f);
  add_matching(pipeline, f);
  add_detectors(pipeline, f);

  auto* inject = app.add_subcommand("inject", "inject a labelled anomaly into one series");
  add_common(inject, f);
  add_injection(inject, spec, kind);

  auto* evaluate = app.add_subcommand("evaluate", "inject, detect and score each detector");
  add_common(evaluate, f);
  add_detectors(evaluate, f);
  add_injection(evaluate, spec, kind);
  evaluate->add_option("--slack", slack, "index tolerance (default: detector window/order)");

  auto* report = app.add_subcommand("report", "summary statistics for top and bottom pairs");
  add_common(report, f);
  add_matching(report, f);

  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic corpus with known overlaps");
  synth_cmd->add_option("--out", synth_out, "output directory");
  synth_cmd->add_option("--seed", synth.seed, "random seed");
  synth_cmd->add_option("--start-ms", synth.start_ms, "first timestamp");
  synth_cmd->add_option("--duration-ms", synth.duration_ms, "corpus span");
  synth_cmd->add_option("--hist-cadence-ms", synth.hist_cadence_ms, "HIST sample spacing");
  synth_cmd->add_option("--ion-cadence-ms", synth.ion_cadence_ms, "ION sample spacing");
  synth_cmd->add_option("--pairs", synth.pairs, "overlapping ION/HIST pairs");
  synth_cmd->add_option("--extra-hist", synth.extra_hist, "unmatched HIST series");
  synth_cmd->add_option("--spikes", synth.spikes, "spikes per HIST series");
  synth_cmd->add_option("--spike-height", synth.spike_height, "spike magnitude");

  CLI11_PARSE(app, argc, argv);

  try {
    CommandResult result;
    if (*synth_cmd) {
      result = cmd_synth(synth, synth_out, std::cout);
    } else {
      const auto config = build_config(f);
      spec.kind = parse_injection_kind(kind);
      if (slack >= 0) spec.slack = slack;
      if (*ingest) result = cmd_ingest(config, std::cout);
      if (*match) result = cmd_match(config, std::cout);
      if (*detect) {
        result = cmd_detect(config, series,
                            merge_with.empty() ? std::nullopt : std::optional(merge_with),
                            std::cout);
      }
      if (*pipeline) result = cmd_pipeline(config, std::cout);
      if (*inject) result = cmd_inject(config, spec, std::cout);
      if (*evaluate) result = cmd_inject_eval(config, spec, std::cout);
      if (*report) result = cmd_report(config, std::cout);
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& p : result.written) std::cout << "wrote " << p.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
