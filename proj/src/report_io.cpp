#include "overlap/report_io.hpp"

#include "overlap/error.hpp"

#include <charconv>
#include <sstream>

namespace overlap {

namespace {

template <typename Series>
std::string anomalies_csv(const AnomalySet& set, const Series& series, bool with_origin) {
  std::ostringstream out;
  out << "index,timestamp,value,score" << (with_origin ? ",origin" : "") << '\n';
  for (std::size_t k = 0; k < set.flagged.size(); ++k) {
    const auto idx = static_cast<std::size_t>(set.flagged[k]);
    if (idx >= series.samples.size()) {
      throw Error(ErrorCode::SeriesMismatch, "anomaly index beyond series end");
    }
    const auto& s = series.samples[idx];
    out << idx << ',' << s.t.millis << ',' << format_double(s.v) << ','
        << format_double(set.scores[k]);
    if constexpr (std::is_same_v<Series, MergedSeries>) {
      if (with_origin) out << ',' << to_string(series.origin[idx]);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json ratio_json(const CoverageRatio& r) {
  if (r.ratio) return *r.ratio;
  return nullptr;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string matches_to_csv(const std::vector<MatchResult>& results) {
  std::ostringstream out;
  out << "rank,ion_name,hist_name,distance\n";
  for (const auto& r : results) {
    out << r.rank << ',' << r.ion_id.name << ',' << r.hist_id.name << ','
        << format_double(r.distance) << '\n';
  }
  return out.str();
}

std::vector<MatchResult> matches_from_csv(std::string_view text) {
  std::vector<MatchResult> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("rank,ion_name,hist_name,distance", 0) != 0) {
    throw Error(ErrorCode::MissingColumn, "matches CSV header");
  }
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string rank, ion, hist, dist;
    if (!std::getline(cells, rank, ',') || !std::getline(cells, ion, ',') ||
        !std::getline(cells, hist, ',') || !std::getline(cells, dist, ',')) {
      throw Error(ErrorCode::UnparseableValue, "matches row " + std::to_string(row), row);
    }
    MatchResult r;
    r.ion_id = {SystemTag::Ion, ion};
    r.hist_id = {SystemTag::Hist, hist};
    try {
      r.rank = static_cast<std::size_t>(std::stoull(rank));
      r.distance = std::stod(dist);
    } catch (const std::exception&) {
      throw Error(ErrorCode::UnparseableValue, "matches row " + std::to_string(row), row);
    }
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::ordered_json recipe_to_json(const SamplingRecipe& recipe) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(recipe.kind);
  switch (recipe.kind) {
    case SamplingKind::StepSize:
      j["hist_step"] = recipe.hist_step;
      j["ion_step"] = recipe.ion_step;
      break;
    case SamplingKind::FirstN:
      j["n_points"] = recipe.n_points;
      break;
    case SamplingKind::DateRange:
      j["range_start"] = recipe.range_start.millis;
      j["range_end"] = recipe.range_end.millis;
      j["hist_step"] = recipe.hist_step;
      j["ion_step"] = recipe.ion_step;
      break;
  }
  return j;
}

nlohmann::ordered_json match_meta_json(const MatchRun& run, const SamplingRecipe& recipe,
                                       const MatchOptions& options) {
  nlohmann::ordered_json j;
  j["recipe"] = recipe_to_json(recipe);
  j["radius"] = options.radius;
  j["metric"] = to_string(options.metric);
  j["z_normalize"] = options.z_normalize;
  j["pairs"] = run.results.size();
  j["elapsed_seconds"] = run.elapsed_seconds;
  return j;
}

nlohmann::ordered_json params_to_json(const DetectorParams& params) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(params.kind);
  if (params.kind == DetectorKind::AutoRegression) {
    j["order_p"] = params.order_p;
  } else {
    j["window_w"] = params.window_w;
  }
  j["threshold_k"] = params.threshold_k;
  j["rule"] = to_string(params.rule);
  return j;
}

std::string anomalies_to_csv(const AnomalySet& set, const TimeSeries& series) {
  return anomalies_csv(set, series, false);
}

std::string anomalies_to_csv(const AnomalySet& set, const MergedSeries& series) {
  return anomalies_csv(set, series, true);
}

std::string merged_to_csv(const MergedSeries& merged) {
  std::ostringstream out;
  out << "timestamp,value,origin\n";
  for (std::size_t k = 0; k < merged.samples.size(); ++k) {
    out << merged.samples[k].t.millis << ',' << format_double(merged.samples[k].v) << ','
        << to_string(merged.origin[k]) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json comparison_to_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["rank"] = report.rank;
  j["ion"] = report.ion_name;
  j["hist"] = report.hist_name;
  j["distance"] = report.distance;
  nlohmann::ordered_json detectors;
  for (const auto& d : report.detectors) {
    nlohmann::ordered_json row;
    row["ion"] = d.ion;
    row["hist"] = d.hist;
    row["merged"] = d.merged;
    row["percent_change"] = d.percent_change ? nlohmann::ordered_json(*d.percent_change)
                                            : nlohmann::ordered_json(nullptr);
    row["ratio"] = ratio_json(d.ratio);
    row["missed_by_single"] = d.ratio.missed;
    row["merged_ratio"] = ratio_json(d.merged_ratio);
    row["merge_loss"] = d.merge_loss;
    detectors[std::string(to_string(d.kind))] = std::move(row);
  }
  j["detectors"] = std::move(detectors);
  return j;
}

std::string reports_to_csv(const std::vector<ComparisonReport>& reports) {
  std::ostringstream out;
  out << "rank,measurement,rolling_average,autoregression,level_shift\n";
  for (const auto& r : reports) {
    const auto row = [&](const std::string& name, auto field) {
      out << r.rank << ',' << name;
      for (const auto& d : r.detectors) out << ',' << field(d);
      out << '\n';
    };
    row(r.ion_name, [](const DetectorComparison& d) { return d.ion; });
    row(r.hist_name, [](const DetectorComparison& d) { return d.hist; });
    row("Merged", [](const DetectorComparison& d) { return d.merged; });
  }
  return out.str();
}

nlohmann::ordered_json label_to_json(const InjectionLabel& label) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(label.kind);
  j["series"] = label.series_name;
  j["indices"] = label.indices;
  j["window"] = {label.window_start.millis, label.window_end.millis};
  j["seed"] = label.seed;
  j["generator"] = SeededStream::kAlgorithm;
  return j;
}

InjectionLabel label_from_json(const nlohmann::json& doc) {
  try {
    InjectionLabel label;
    label.kind = parse_injection_kind(doc.at("kind").get<std::string>());
    label.series_name = doc.value("series", std::string{});
    label.indices = doc.at("indices").get<std::vector<Index>>();
    const auto window = doc.at("window").get<std::vector<std::int64_t>>();
    if (window.size() != 2) throw Error(ErrorCode::InvalidArgument, "window needs two values");
    label.window_start = Timestamp{window[0]};
    label.window_end = Timestamp{window[1]};
    label.seed = doc.at("seed").get<std::uint64_t>();
    return label;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("label JSON: ") + e.what());
  }
}

nlohmann::ordered_json eval_to_json(const EvalScore& score) {
  nlohmann::ordered_json j;
  j["true_positives"] = score.true_positives;
  j["false_positives"] = score.false_positives;
  j["false_negatives"] = score.false_negatives;
  j["precision"] = score.precision;
  j["recall"] = score.recall;
  j["f1"] = score.f1;
  return j;
}

std::string stats_to_csv(const std::vector<StatsRow>& rows) {
  std::ostringstream out;
  out << "group,rank,measurement,count,mean,std,min,max\n";
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
  };
  for (const auto& r : rows) {
    out << r.group << ',' << r.rank << ',' << r.measurement << ',' << r.stats.count << ','
        << opt(r.stats.mean) << ',' << opt(r.stats.std) << ',' << opt(r.stats.min) << ','
        << opt(r.stats.max) << '\n';
  }
  return out.str();
}

}  // namespace overlap
