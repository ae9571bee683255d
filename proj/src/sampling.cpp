#include "overlap/sampling.hpp"

#include "overlap/error.hpp"

#include <algorithm>

namespace overlap {

std::string_view to_string(SamplingKind kind) {
  switch (kind) {
    case SamplingKind::StepSize: return "step";
    case SamplingKind::FirstN: return "first-n";
    case SamplingKind::DateRange: return "date-range";
  }
  return "step";
}

SamplingRecipe SamplingRecipe::step(std::size_t hist_step, std::size_t ion_step) {
  SamplingRecipe r;
  r.kind = SamplingKind::StepSize;
  r.hist_step = hist_step;
  r.ion_step = ion_step;
  return r;
}

SamplingRecipe SamplingRecipe::first_n(std::size_t n) {
  SamplingRecipe r;
  r.kind = SamplingKind::FirstN;
  r.n_points = n;
  return r;
}

SamplingRecipe SamplingRecipe::date_range(Timestamp start, Timestamp end, std::size_t hist_step,
                                          std::size_t ion_step) {
  SamplingRecipe r;
  r.kind = SamplingKind::DateRange;
  r.range_start = start;
  r.range_end = end;
  r.hist_step = hist_step;
  r.ion_step = ion_step;
  return r;
}

void SamplingRecipe::check() const {
  switch (kind) {
    case SamplingKind::DateRange:
      if (range_start > range_end) {
        throw Error(ErrorCode::InvalidRange, "sampling range start after end");
      }
      [[fallthrough]];
    case SamplingKind::StepSize:
      if (hist_step == 0 || ion_step == 0) throw Error(ErrorCode::ZeroStep, "step must be >= 1");
      break;
    case SamplingKind::FirstN:
      if (n_points == 0) throw Error(ErrorCode::InvalidArgument, "n_points must be >= 1");
      break;
  }
}

TimeSeries SamplingRecipe::apply(const TimeSeries& s) const {
  const std::size_t k = s.id.system == SystemTag::Hist ? hist_step : ion_step;
  switch (kind) {
    case SamplingKind::StepSize: return sample_step(s, k);
    case SamplingKind::FirstN: return sample_first_n(s, n_points);
    case SamplingKind::DateRange: return sample_date_range(s, range_start, range_end, k);
  }
  return s;
}

TimeSeries sample_step(const TimeSeries& s, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::ZeroStep, "step must be >= 1");
  TimeSeries out{s.id, {}};
  out.samples.reserve((s.size() + k - 1) / k);
  for (std::size_t i = 0; i < s.size(); i += k) out.samples.push_back(s.samples[i]);
  return out;
}

TimeSeries sample_first_n(const TimeSeries& s, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  TimeSeries out{s.id, {}};
  const auto take = std::min(n, s.size());
  out.samples.assign(s.samples.begin(), s.samples.begin() + static_cast<std::ptrdiff_t>(take));
  return out;
}

TimeSeries sample_date_range(const TimeSeries& s, Timestamp start, Timestamp end, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::ZeroStep, "step must be >= 1");
  return sample_step(slice_by_range(s, start, end), k);
}

}  // namespace overlap
