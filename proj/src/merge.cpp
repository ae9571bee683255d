#include "overlap/merge.hpp"

namespace overlap {

std::string_view to_string(Origin o) { return o == Origin::FromIon ? "ION" : "HIST"; }

Eigen::VectorXd MergedSeries::values() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) out[static_cast<Eigen::Index>(k)] = samples[k].v;
  return out;
}

MergedSeries merge_pair(const TimeSeries& ion, const TimeSeries& hist) {
  MergedSeries out;
  out.name = ion.id.name + "+" + hist.id.name;
  out.ion_id = ion.id;
  out.hist_id = hist.id;
  out.samples.reserve(ion.size() + hist.size());
  out.origin.reserve(ion.size() + hist.size());

  std::size_t a = 0;
  std::size_t b = 0;
  while (a < ion.size() || b < hist.size()) {
    const bool take_ion =
        b == hist.size() || (a < ion.size() && ion.samples[a].t <= hist.samples[b].t);
    if (take_ion) {
      out.samples.push_back(ion.samples[a++]);
      out.origin.push_back(Origin::FromIon);
    } else {
      out.samples.push_back(hist.samples[b++]);
      out.origin.push_back(Origin::FromHist);
    }
  }
  return out;
}

std::pair<TimeSeries, TimeSeries> split(const MergedSeries& merged) {
  TimeSeries ion{merged.ion_id, {}};
  TimeSeries hist{merged.hist_id, {}};
  for (std::size_t k = 0; k < merged.samples.size(); ++k) {
    (merged.origin[k] == Origin::FromIon ? ion : hist).samples.push_back(merged.samples[k]);
  }
  return {std::move(ion), std::move(hist)};
}

}  // namespace overlap
