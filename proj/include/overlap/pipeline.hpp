#pragma once

// Batch commands behind the `overlap` executable. Each command writes its
// files into RunConfig::out_dir atomically: outputs are staged and only
// moved into place once every file has been produced.

#include "overlap/analysis.hpp"
#include "overlap/detectors.hpp"
#include "overlap/injection.hpp"
#include "overlap/match.hpp"
#include "overlap/sampling.hpp"
#include "overlap/synth.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace overlap {

struct RunConfig {
  std::filesystem::path manifest;
  SamplingRecipe recipe{SamplingRecipe::step(100, 2)};
  MatchOptions match;
  /// RA, AR, LS in report order.
  std::array<DetectorParams, 3> detectors{DetectorParams::rolling_average(),
                                          DetectorParams::autoregression(),
                                          DetectorParams::level_shift()};
  std::size_t top_n{4};
  std::filesystem::path out_dir{"."};
  std::uint64_t seed{0};

  void check() const;
  const DetectorParams& detector(DetectorKind kind) const;
};

struct InjectionSpec {
  InjectionKind kind{InjectionKind::DosZeroRun};
  std::string series;
  std::optional<std::int64_t> at_ms;  // zero-run start; default: middle sample
  std::optional<std::int64_t> duration_ms;
  std::size_t count{10};
  double sigma{1.0};
  std::optional<Index> slack;  // default: each detector's window / order
};

/// Stages files in the output directory and publishes them together.
/// Anything not committed is removed on destruction.
class OutputStage {
 public:
  explicit OutputStage(std::filesystem::path dir);
  OutputStage(const OutputStage&) = delete;
  OutputStage& operator=(const OutputStage&) = delete;
  ~OutputStage();

  void write(const std::string& name, const std::string& content);
  void commit();
  std::vector<std::filesystem::path> files() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
  bool committed_{false};
};

struct CommandResult {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

CommandResult cmd_ingest(const RunConfig& config, std::ostream& log);
CommandResult cmd_match(const RunConfig& config, std::ostream& log);
CommandResult cmd_detect(const RunConfig& config, const std::string& series,
                         const std::optional<std::string>& merge_with, std::ostream& log);
CommandResult cmd_pipeline(const RunConfig& config, std::ostream& log);
CommandResult cmd_inject(const RunConfig& config, const InjectionSpec& spec, std::ostream& log);
CommandResult cmd_inject_eval(const RunConfig& config, const InjectionSpec& spec, std::ostream& log);
CommandResult cmd_report(const RunConfig& config, std::ostream& log);
CommandResult cmd_synth(const SynthConfig& synth, const std::filesystem::path& out_dir,
                        std::ostream& log);

/// The three configured detectors on `values`, in report order.
std::array<AnomalySet, 3> run_detectors(const RunConfig& config,
                                        const Eigen::Ref<const Eigen::VectorXd>& values,
                                        const std::string& name);

}  // namespace overlap
