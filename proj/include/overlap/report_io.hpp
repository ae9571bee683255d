#pragma once

// File formats written by the command-line front end.

#include "overlap/analysis.hpp"
#include "overlap/detectors.hpp"
#include "overlap/injection.hpp"
#include "overlap/match.hpp"
#include "overlap/merge.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace overlap {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// `rank,ion_name,hist_name,distance`
std::string matches_to_csv(const std::vector<MatchResult>& results);
std::vector<MatchResult> matches_from_csv(std::string_view text);

nlohmann::ordered_json recipe_to_json(const SamplingRecipe& recipe);
nlohmann::ordered_json match_meta_json(const MatchRun& run, const SamplingRecipe& recipe,
                                       const MatchOptions& options);

nlohmann::ordered_json params_to_json(const DetectorParams& params);

/// `index,timestamp,value,score`, plus `origin` for merged series.
std::string anomalies_to_csv(const AnomalySet& set, const TimeSeries& series);
std::string anomalies_to_csv(const AnomalySet& set, const MergedSeries& series);

/// Merged series in the series CSV format with an extra `origin` column.
std::string merged_to_csv(const MergedSeries& merged);

nlohmann::ordered_json comparison_to_json(const ComparisonReport& report);

/// Three rows (ION, HIST, Merged) per pair, columns RA, AR, LS.
std::string reports_to_csv(const std::vector<ComparisonReport>& reports);

nlohmann::ordered_json label_to_json(const InjectionLabel& label);
InjectionLabel label_from_json(const nlohmann::json& doc);

nlohmann::ordered_json eval_to_json(const EvalScore& score);

struct StatsRow {
  std::string group;  // "top" / "bottom"
  std::size_t rank{0};
  std::string measurement;
  SummaryStats stats;
};

/// `group,rank,measurement,count,mean,std,min,max`.
std::string stats_to_csv(const std::vector<StatsRow>& rows);

}  // namespace overlap
