#pragma once

// Dynamic time warping over dense Eigen vectors.
//
// dtw_exact fills the whole len(a) x len(b) lattice. fastdtw follows the
// multiresolution scheme of Salvador & Chan: halve both inputs, solve the
// coarse problem recursively, project the coarse path back to full
// resolution, widen it by `radius` cells and solve the DP inside that band.
// Both share one windowed DP, so a full window reproduces dtw_exact bit for
// bit.

#include "overlap/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace overlap {

using Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Metric { L1, L2 };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view text);

struct WarpStep {
  Index i{0};
  Index j{0};

  bool operator==(const WarpStep&) const = default;
};

using WarpPath = std::vector<WarpStep>;

template <typename Scalar>
struct DtwResult {
  Scalar distance{0};
  WarpPath path;
  Metric metric{Metric::L2};
  std::int64_t cells_evaluated{0};
};

/// Starts at (0,0), ends at (len_a-1, len_b-1), every step advances i, j or
/// both by exactly one.
bool is_valid_warp_path(const WarpPath& path, Index len_a, Index len_b);

/// Set of lattice cells stored as one contiguous column range per row.
class SearchWindow {
 public:
  SearchWindow(Index rows, Index cols);

  static SearchWindow full(Index rows, Index cols);

  /// Extends row `i` so that it covers [j_lo, j_hi] (clipped to the lattice).
  void include(Index i, Index j_lo, Index j_hi);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index lo(Index i) const { return lo_[static_cast<std::size_t>(i)]; }
  Index hi(Index i) const { return hi_[static_cast<std::size_t>(i)]; }
  bool row_empty(Index i) const { return lo(i) > hi(i); }
  bool contains(Index i, Index j) const {
    return i >= 0 && i < rows_ && j >= lo(i) && j <= hi(i);
  }
  std::int64_t cell_count() const;
  std::vector<WarpStep> cells() const;

 private:
  Index rows_;
  Index cols_;
  std::vector<Index> lo_;
  std::vector<Index> hi_;
};

/// Series of at most this length are solved exactly inside fastdtw.
constexpr Index fastdtw_base_threshold(Index radius) {
  return std::max<Index>(radius + 2, 16);
}

namespace detail {

template <typename Scalar>
inline Scalar pointwise_cost(Scalar x, Scalar y, Metric metric) {
  const Scalar d = x - y;
  return metric == Metric::L1 ? std::abs(d) : d * d;
}

template <typename Scalar>
inline Scalar finish_distance(Scalar accumulated, Metric metric) {
  return metric == Metric::L1 ? accumulated : std::sqrt(accumulated);
}

inline void require_non_empty(Index n, Index m) {
  if (n < 1 || m < 1) throw Error(ErrorCode::EmptyInput, "DTW needs two non-empty series");
}

template <typename Scalar>
DtwResult<Scalar> windowed_dtw(const Eigen::Ref<const Vector<Scalar>>& a,
                               const Eigen::Ref<const Vector<Scalar>>& b,
                               const SearchWindow& window, Metric metric) {
  const Index n = a.size();
  const Index m = b.size();
  require_non_empty(n, m);
  if (window.rows() != n || window.cols() != m) {
    throw Error(ErrorCode::InvalidArgument, "search window does not match the series lengths");
  }
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

  std::vector<std::int64_t> offset(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    if (window.row_empty(i)) {
      throw Error(ErrorCode::InvalidArgument, "search window leaves row " + std::to_string(i) +
                                                  " empty");
    }
    offset[static_cast<std::size_t>(i) + 1] =
        offset[static_cast<std::size_t>(i)] + (window.hi(i) - window.lo(i) + 1);
  }
  std::vector<Scalar> acc(static_cast<std::size_t>(offset.back()), inf);
  const auto at = [&](Index i, Index j) -> Scalar {
    if (i < 0 || j < 0 || !window.contains(i, j)) return inf;
    return acc[static_cast<std::size_t>(offset[static_cast<std::size_t>(i)] + j - window.lo(i))];
  };

  for (Index i = 0; i < n; ++i) {
    const Index lo = window.lo(i);
    Scalar* row = acc.data() + offset[static_cast<std::size_t>(i)] - lo;
    for (Index j = lo; j <= window.hi(i); ++j) {
      const Scalar c = pointwise_cost(a[i], b[j], metric);
      Scalar best;
      if (i == 0 && j == 0) {
        best = Scalar(0);
      } else {
        const Scalar left = j > lo ? row[j - 1] : inf;
        best = std::min({at(i - 1, j - 1), at(i - 1, j), left});
      }
      row[j] = c + best;
    }
  }

  DtwResult<Scalar> out;
  out.metric = metric;
  out.cells_evaluated = offset.back();
  const Scalar total = at(n - 1, m - 1);
  if (!std::isfinite(total)) {
    throw Error(ErrorCode::InvalidArgument, "search window has no connected warp path");
  }
  out.distance = finish_distance(total, metric);

  // Backtrack: diagonal first, then the i-decrement, then the j-decrement.
  Index i = n - 1;
  Index j = m - 1;
  out.path.push_back({i, j});
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const Scalar diag = at(i - 1, j - 1);
      const Scalar up = at(i - 1, j);
      const Scalar left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    out.path.push_back({i, j});
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

template <typename Scalar>
Scalar dtw_distance_two_rows(const Eigen::Ref<const Vector<Scalar>>& a,
                             const Eigen::Ref<const Vector<Scalar>>& b, Metric metric) {
  const Index n = a.size();
  const Index m = b.size();
  require_non_empty(n, m);
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> prev(static_cast<std::size_t>(m), inf);
  std::vector<Scalar> cur(static_cast<std::size_t>(m), inf);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Scalar c = pointwise_cost(a[i], b[j], metric);
      Scalar best;
      if (i == 0 && j == 0) {
        best = Scalar(0);
      } else {
        const Scalar diag = (i > 0 && j > 0) ? prev[uj - 1] : inf;
        const Scalar up = i > 0 ? prev[uj] : inf;
        const Scalar left = j > 0 ? cur[uj - 1] : inf;
        best = std::min({diag, up, left});
      }
      cur[uj] = c + best;
    }
    std::swap(prev, cur);
  }
  return finish_distance(prev.back(), metric);
}

template <typename Scalar>
Vector<Scalar> coarsen(const Eigen::Ref<const Vector<Scalar>>& a) {
  const Index n = a.size();
  if (n < 2) throw Error(ErrorCode::TooShort, "coarsening needs at least two points");
  Vector<Scalar> out((n + 1) / 2);
  for (Index k = 0; k < n / 2; ++k) out[k] = (a[2 * k] + a[2 * k + 1]) / Scalar(2);
  if (n % 2 == 1) out[n / 2] = a[n - 1];
  return out;
}

SearchWindow expand_window(const WarpPath& coarse_path, Index len_a, Index len_b, Index radius);

template <typename Scalar>
DtwResult<Scalar> fastdtw(const Eigen::Ref<const Vector<Scalar>>& a,
                          const Eigen::Ref<const Vector<Scalar>>& b, Index radius,
                          Metric metric) {
  require_non_empty(a.size(), b.size());
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be >= 0");
  const Index threshold = fastdtw_base_threshold(radius);
  if (a.size() <= threshold || b.size() <= threshold) {
    return detail::windowed_dtw<Scalar>(a, b, SearchWindow::full(a.size(), b.size()), metric);
  }
  const Vector<Scalar> coarse_a = detail::coarsen<Scalar>(a);
  const Vector<Scalar> coarse_b = detail::coarsen<Scalar>(b);
  const auto coarse = detail::fastdtw<Scalar>(coarse_a, coarse_b, radius, metric);
  const auto window = expand_window(coarse.path, a.size(), b.size(), radius);
  auto fine = detail::windowed_dtw<Scalar>(a, b, window, metric);
  fine.cells_evaluated += coarse.cells_evaluated;
  return fine;
}

}  // namespace detail

/// Exact DTW over the full lattice, with the optimal warp path.
template <typename DerivedA, typename DerivedB>
auto dtw_exact(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
               Metric metric = Metric::L2) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>, "mixed scalar types");
  const Eigen::Ref<const Vector<Scalar>> ra(a.derived());
  const Eigen::Ref<const Vector<Scalar>> rb(b.derived());
  return detail::windowed_dtw<Scalar>(ra, rb, SearchWindow::full(ra.size(), rb.size()), metric);
}

/// Exact DTW distance only; keeps two DP rows instead of the lattice.
template <typename DerivedA, typename DerivedB>
auto dtw_exact_distance(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b, Metric metric = Metric::L2) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>, "mixed scalar types");
  return detail::dtw_distance_two_rows<Scalar>(a.derived(), b.derived(), metric);
}

/// DTW restricted to the cells of `window`.
template <typename DerivedA, typename DerivedB>
auto windowed_dtw(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  const SearchWindow& window, Metric metric = Metric::L2) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>, "mixed scalar types");
  return detail::windowed_dtw<Scalar>(a.derived(), b.derived(), window, metric);
}

template <typename Derived>
auto coarsen(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return detail::coarsen<Scalar>(a.derived());
}

template <typename DerivedA, typename DerivedB>
auto fastdtw(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
             Index radius = 1, Metric metric = Metric::L2) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>, "mixed scalar types");
  return detail::fastdtw<Scalar>(a.derived(), b.derived(), radius, metric);
}

/// (x - mean) / population std; a constant input maps to zeros.
template <typename Derived>
auto z_normalize(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> out = a;
  if (out.size() == 0) return out;
  const Scalar mean = out.mean();
  out.array() -= mean;
  const Scalar sd = std::sqrt(out.squaredNorm() / Scalar(out.size()));
  if (sd > Scalar(0)) out /= sd;
  else out.setZero();
  return out;
}

}  // namespace overlap
