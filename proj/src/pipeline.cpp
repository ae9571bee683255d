#include "overlap/pipeline.hpp"

#include "overlap/error.hpp"
#include "overlap/ingestion.hpp"
#include "overlap/merge.hpp"
#include "overlap/report_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace overlap {

namespace fs = std::filesystem;

namespace {

LoadResult load(const RunConfig& config, std::vector<std::string>& warnings) {
  auto result = load_corpus(read_manifest(config.manifest));
  warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
  return result;
}

MatchRun match_corpus(const RunConfig& config, const Corpus& corpus) {
  const auto ion = corpus.partition(SystemTag::Ion);
  const auto hist = corpus.partition(SystemTag::Hist);
  return match_all(ion, hist, config.recipe, config.match);
}

void print_top(const std::vector<MatchResult>& results, std::size_t n, std::ostream& log) {
  log << "rank  ion                 hist                distance\n";
  for (std::size_t k = 0; k < std::min(n, results.size()); ++k) {
    const auto& r = results[k];
    log << std::left << std::setw(6) << r.rank << std::setw(20) << r.ion_id.name << std::setw(20)
        << r.hist_id.name << format_double(r.distance) << '\n';
  }
}

const TimeSeries& series_of(const Corpus& corpus, const MeasurementId& id) {
  const auto it = corpus.series().find(id);
  if (it == corpus.series().end()) throw Error(ErrorCode::UnknownSeries, id.name);
  return it->second;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

Index default_slack(const DetectorParams& p) {
  return p.kind == DetectorKind::AutoRegression ? p.order_p : p.window_w;
}

Injection apply_injection(const TimeSeries& target, const InjectionSpec& spec,
                          std::uint64_t seed) {
  if (spec.kind == InjectionKind::DosZeroRun) {
    if (target.empty()) throw Error(ErrorCode::EmptyInput, target.id.name + " is empty");
    const Timestamp at = spec.at_ms ? Timestamp{*spec.at_ms}
                                    : target.samples[target.size() / 2].t;
    return inject_zero_run(target, at, spec.duration_ms, seed);
  }
  return inject_gaussian_noise(target, spec.count, spec.sigma, seed);
}

}  // namespace

void RunConfig::check() const {
  if (top_n < 1) throw Error(ErrorCode::InvalidArgument, "top-n must be >= 1");
  recipe.check();
  for (const auto& d : detectors) d.check();
  if (match.radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be >= 0");
  if (!manifest.empty() && !fs::exists(manifest)) {
    throw Error(ErrorCode::IoError, "manifest " + manifest.string() + " does not exist");
  }
}

const DetectorParams& RunConfig::detector(DetectorKind kind) const {
  for (const auto& d : detectors) {
    if (d.kind == kind) return d;
  }
  throw Error(ErrorCode::InvalidArgument, "detector not configured");
}

OutputStage::OutputStage(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
}

OutputStage::~OutputStage() {
  if (committed_) return;
  for (const auto& [tmp, final_path] : staged_) {
    std::error_code ec;
    fs::remove(tmp, ec);
  }
}

void OutputStage::write(const std::string& name, const std::string& content) {
  if (committed_) throw Error(ErrorCode::InvalidArgument, "output stage already committed");
  const fs::path final_path = dir_ / name;
  fs::path tmp = final_path;
  tmp += ".partial";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  staged_.emplace_back(tmp, final_path);
}

void OutputStage::commit() {
  for (const auto& [tmp, final_path] : staged_) {
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot publish " + final_path.string());
  }
  committed_ = true;
}

std::vector<fs::path> OutputStage::files() const {
  std::vector<fs::path> out;
  for (const auto& [tmp, final_path] : staged_) out.push_back(final_path);
  return out;
}

std::array<AnomalySet, 3> run_detectors(const RunConfig& config,
                                        const Eigen::Ref<const Eigen::VectorXd>& values,
                                        const std::string& name) {
  std::array<AnomalySet, 3> out;
  for (std::size_t d = 0; d < kReportDetectorOrder.size(); ++d) {
    out[d] = run_detector(config.detector(kReportDetectorOrder[d]), values, name);
  }
  return out;
}

CommandResult cmd_ingest(const RunConfig& config, std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);
  std::ostringstream csv;
  csv << "system,name,rows,skipped,count,mean,std,min,max\n";
  for (const auto& e : loaded.entries) {
    const auto stats = describe(series_of(loaded.corpus, e.id));
    const auto opt = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string{};
    };
    csv << to_string(e.id.system) << ',' << e.id.name << ',' << e.rows << ',' << e.skipped_rows
        << ',' << stats.count << ',' << opt(stats.mean) << ',' << opt(stats.std) << ','
        << opt(stats.min) << ',' << opt(stats.max) << '\n';
    log << to_string(e.id.system) << ' ' << e.id.name << ": " << e.rows << " rows";
    if (e.skipped_rows > 0) log << " (" << e.skipped_rows << " skipped)";
    log << '\n';
  }
  log << loaded.corpus.count(SystemTag::Ion) << " ION, " << loaded.corpus.count(SystemTag::Hist)
      << " HIST series\n";
  OutputStage stage(config.out_dir);
  stage.write("ingest.csv", csv.str());
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_match(const RunConfig& config, std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);
  const auto run = match_corpus(config, loaded.corpus);
  print_top(run.results, 10, log);
  log << run.results.size() << " pairs in " << run.elapsed_seconds << " s\n";

  OutputStage stage(config.out_dir);
  stage.write("matches.csv", matches_to_csv(run.results));
  stage.write("matches.meta.json", dump(match_meta_json(run, config.recipe, config.match)));
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_detect(const RunConfig& config, const std::string& series,
                         const std::optional<std::string>& merge_with, std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);
  const auto& first = loaded.corpus.find(series);

  OutputStage stage(config.out_dir);
  if (merge_with) {
    const auto& second = loaded.corpus.find(*merge_with);
    if (first.id.system == second.id.system) {
      throw Error(ErrorCode::InvalidArgument, "merging needs one ION and one HIST series");
    }
    const auto& ion = first.id.system == SystemTag::Ion ? first : second;
    const auto& hist = first.id.system == SystemTag::Ion ? second : first;
    const auto merged = merge_pair(ion, hist);
    const auto sets = run_detectors(config, merged.values(), merged.name);
    for (const auto& set : sets) {
      log << merged.name << ' ' << to_string(set.params.kind) << ": " << set.size()
          << " anomalies\n";
      stage.write("anomalies." + std::string(short_name(set.params.kind)) + ".csv",
                  anomalies_to_csv(set, merged));
    }
  } else {
    const auto sets = run_detectors(config, first.values(), first.id.name);
    for (const auto& set : sets) {
      log << first.id.name << ' ' << to_string(set.params.kind) << ": " << set.size()
          << " anomalies\n";
      stage.write("anomalies." + std::string(short_name(set.params.kind)) + ".csv",
                  anomalies_to_csv(set, first));
    }
  }
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_pipeline(const RunConfig& config, std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);
  const auto run = match_corpus(config, loaded.corpus);
  print_top(run.results, 10, log);

  std::size_t take = config.top_n;
  if (take > run.results.size()) {
    result.warnings.push_back("top-n " + std::to_string(take) + " exceeds the " +
                              std::to_string(run.results.size()) +
                              " available pairs; processing all of them");
    take = run.results.size();
  }

  std::vector<ComparisonReport> reports;
  for (std::size_t k = 0; k < take; ++k) {
    const auto& pair = run.results[k];
    const auto& ion = series_of(loaded.corpus, pair.ion_id);
    const auto& hist = series_of(loaded.corpus, pair.hist_id);
    const auto merged = merge_pair(ion, hist);
    PairDetections detections;
    detections.ion = run_detectors(config, ion.values(), ion.id.name);
    detections.hist = run_detectors(config, hist.values(), hist.id.name);
    detections.merged = run_detectors(config, merged.values(), merged.name);
    reports.push_back(build_report(pair, detections));
  }

  nlohmann::ordered_json doc;
  doc["recipe"] = recipe_to_json(config.recipe);
  doc["radius"] = config.match.radius;
  doc["metric"] = to_string(config.match.metric);
  doc["z_normalize"] = config.match.z_normalize;
  doc["top_n"] = config.top_n;
  doc["detectors"] = nlohmann::ordered_json::array();
  for (const auto& d : config.detectors) doc["detectors"].push_back(params_to_json(d));
  doc["pairs"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) doc["pairs"].push_back(comparison_to_json(r));

  for (const auto& r : reports) {
    log << '#' << r.rank << ' ' << r.ion_name << '+' << r.hist_name << ":";
    for (const auto& d : r.detectors) {
      log << ' ' << short_name(d.kind) << ' ' << d.ion << '/' << d.hist << '/' << d.merged;
    }
    log << '\n';
  }

  OutputStage stage(config.out_dir);
  stage.write("matches.csv", matches_to_csv(run.results));
  stage.write("matches.meta.json", dump(match_meta_json(run, config.recipe, config.match)));
  stage.write("report.json", dump(doc));
  stage.write("report.csv", reports_to_csv(reports));
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_inject(const RunConfig& config, const InjectionSpec& spec, std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);
  const auto injected = apply_injection(loaded.corpus.find(spec.series), spec, config.seed);
  log << to_string(injected.label.kind) << " on " << spec.series << ": "
      << injected.label.indices.size() << " samples\n";
  OutputStage stage(config.out_dir);
  stage.write("injected.csv", to_csv(injected.series));
  stage.write("label.json", dump(label_to_json(injected.label)));
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_inject_eval(const RunConfig& config, const InjectionSpec& spec,
                              std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);
  const auto injected = apply_injection(loaded.corpus.find(spec.series), spec, config.seed);
  const auto sets = run_detectors(config, injected.series.values(), injected.series.id.name);

  OutputStage stage(config.out_dir);
  stage.write("label.json", dump(label_to_json(injected.label)));
  for (const auto& set : sets) {
    const Index slack = spec.slack.value_or(default_slack(set.params));
    const auto score = evaluate(set, injected.label, slack);
    auto doc = eval_to_json(score);
    doc["detector"] = params_to_json(set.params);
    doc["slack"] = slack;
    doc["flagged"] = set.size();
    log << to_string(set.params.kind) << ": precision " << score.precision << " recall "
        << score.recall << " f1 " << score.f1 << '\n';
    stage.write("eval." + std::string(short_name(set.params.kind)) + ".json", dump(doc));
  }
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_report(const RunConfig& config, std::ostream& log) {
  config.check();
  CommandResult result;
  const auto loaded = load(config, result.warnings);

  std::vector<MatchResult> ranked;
  const auto matches_file = config.out_dir / "matches.csv";
  if (fs::exists(matches_file)) {
    std::ifstream in(matches_file, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    ranked = matches_from_csv(text.str());
  } else {
    ranked = match_corpus(config, loaded.corpus).results;
  }

  std::vector<StatsRow> rows;
  const auto add_pair = [&](const std::string& group, const MatchResult& pair) {
    const auto& ion = series_of(loaded.corpus, pair.ion_id);
    const auto& hist = series_of(loaded.corpus, pair.hist_id);
    rows.push_back({group, pair.rank, ion.id.name, describe(ion)});
    rows.push_back({group, pair.rank, hist.id.name, describe(hist)});
    rows.push_back({group, pair.rank, "Merged", describe(merge_pair(ion, hist))});
  };
  const std::size_t take = std::min(config.top_n, ranked.size());
  for (std::size_t k = 0; k < take; ++k) add_pair("top", ranked[k]);
  for (std::size_t k = ranked.size() - take; k < ranked.size(); ++k) add_pair("bottom", ranked[k]);
  log << "statistics for the top and bottom " << take << " pairs\n";

  OutputStage stage(config.out_dir);
  stage.write("stats.csv", stats_to_csv(rows));
  stage.commit();
  result.written = stage.files();
  return result;
}

CommandResult cmd_synth(const SynthConfig& synth, const fs::path& out_dir, std::ostream& log) {
  const auto corpus = make_synthetic_corpus(synth);
  CorpusManifest manifest;
  OutputStage stage(out_dir);
  const auto emit = [&](const TimeSeries& s) {
    const auto file = s.id.name + ".csv";
    stage.write(file, to_csv(s));
    manifest.entries.push_back({s.id, file, ColumnMap{}, TimeFormat::EpochMillis});
  };
  for (const auto& s : corpus.ion) emit(s);
  for (const auto& s : corpus.hist) emit(s);
  stage.write("manifest.json", manifest_to_json(manifest));
  stage.commit();
  for (const auto& [ion, hist] : corpus.overlaps) log << "overlap: " << ion << " ~ " << hist << '\n';
  CommandResult result;
  result.written = stage.files();
  return result;
}

}  // namespace overlap
