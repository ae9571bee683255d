#pragma once

#include "overlap/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

namespace overlap {

/// Median; the mean of the two middle order statistics for even sizes.
template <typename Derived>
typename Derived::Scalar median(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<std::size_t>(x.size());
  if (n == 0) throw Error(ErrorCode::EmptyInput, "median of an empty sequence");
  std::vector<Scalar> buf(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] = x.derived().coeff(static_cast<Eigen::Index>(k));
  const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(buf.begin(), mid, buf.end());
  if (n % 2 == 1) return *mid;
  const Scalar upper = *mid;
  const Scalar lower = *std::max_element(buf.begin(), mid);
  return (lower + upper) / Scalar(2);
}

/// Empirical quantile, linear interpolation between order statistics at
/// position q * (n - 1).
template <typename Derived>
typename Derived::Scalar quantile(const Eigen::DenseBase<Derived>& x, double q) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<std::size_t>(x.size());
  if (n == 0) throw Error(ErrorCode::EmptyInput, "quantile of an empty sequence");
  q = std::clamp(q, 0.0, 1.0);
  std::vector<Scalar> buf(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] = x.derived().coeff(static_cast<Eigen::Index>(k));
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto lo_it = buf.begin() + static_cast<std::ptrdiff_t>(lo);
  std::nth_element(buf.begin(), lo_it, buf.end());
  const Scalar lo_value = *lo_it;
  if (lo + 1 >= n) return lo_value;
  const Scalar hi_value = *std::min_element(lo_it + 1, buf.end());
  return lo_value + Scalar(h - static_cast<double>(lo)) * (hi_value - lo_value);
}

template <typename Derived>
typename Derived::Scalar interquartile_range(const Eigen::DenseBase<Derived>& x) {
  return quantile(x, 0.75) - quantile(x, 0.25);
}

}  // namespace overlap
