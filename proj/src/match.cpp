#include "overlap/match.hpp"

#include "overlap/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace overlap {

namespace {

Eigen::VectorXd prepared_values(const TimeSeries& s, const SamplingRecipe& recipe,
                                bool normalize) {
  const Eigen::VectorXd v = recipe.apply(s).values();
  return normalize ? Eigen::VectorXd(z_normalize(v)) : v;
}

}  // namespace

MatchRun match_all(std::span<const TimeSeries> ion, std::span<const TimeSeries> hist,
                   const SamplingRecipe& recipe, const MatchOptions& options) {
  if (ion.empty()) throw Error(ErrorCode::EmptyPartition, "no ION series to match");
  if (hist.empty()) throw Error(ErrorCode::EmptyPartition, "no HIST series to match");
  recipe.check();
  if (options.radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be >= 0");

  const auto start = std::chrono::steady_clock::now();

  std::vector<Eigen::VectorXd> ion_values;
  std::vector<Eigen::VectorXd> hist_values;
  for (const auto& s : ion) ion_values.push_back(prepared_values(s, recipe, options.z_normalize));
  for (const auto& s : hist) hist_values.push_back(prepared_values(s, recipe, options.z_normalize));
  for (std::size_t k = 0; k < ion.size(); ++k) {
    if (ion_values[k].size() == 0) {
      throw Error(ErrorCode::EmptyInput, ion[k].id.name + " is empty after sampling");
    }
  }
  for (std::size_t k = 0; k < hist.size(); ++k) {
    if (hist_values[k].size() == 0) {
      throw Error(ErrorCode::EmptyInput, hist[k].id.name + " is empty after sampling");
    }
  }

  const std::size_t pairs = ion.size() * hist.size();
  std::vector<MatchResult> results(pairs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  // Each pair writes only its own slot, so the sorted output does not depend
  // on which worker finished first.
  const auto worker = [&] {
    for (std::size_t k = next++; k < pairs; k = next++) {
      const std::size_t a = k / hist.size();
      const std::size_t b = k % hist.size();
      try {
        const auto r = fastdtw(ion_values[a], hist_values[b], options.radius, options.metric);
        results[k] = MatchResult{ion[a].id, hist[b].id, r.distance, recipe, 0};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(pairs, 64)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(results.begin(), results.end(), [](const MatchResult& x, const MatchResult& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    if (x.ion_id.name != y.ion_id.name) return x.ion_id.name < y.ion_id.name;
    return x.hist_id.name < y.hist_id.name;
  });
  for (std::size_t k = 0; k < results.size(); ++k) results[k].rank = k + 1;

  MatchRun run;
  run.results = std::move(results);
  run.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace overlap
