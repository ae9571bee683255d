#include "overlap/dtw.hpp"

namespace overlap {

std::string_view to_string(Metric m) { return m == Metric::L1 ? "l1" : "l2"; }

Metric parse_metric(std::string_view text) {
  if (text == "l1" || text == "L1") return Metric::L1;
  if (text == "l2" || text == "L2") return Metric::L2;
  throw Error(ErrorCode::InvalidArgument, "metric must be l1 or l2");
}

bool is_valid_warp_path(const WarpPath& path, Index len_a, Index len_b) {
  if (path.empty() || len_a < 1 || len_b < 1) return false;
  if (path.front() != WarpStep{0, 0}) return false;
  if (path.back() != WarpStep{len_a - 1, len_b - 1}) return false;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Index di = path[k].i - path[k - 1].i;
    const Index dj = path[k].j - path[k - 1].j;
    if (di < 0 || di > 1 || dj < 0 || dj > 1 || (di == 0 && dj == 0)) return false;
  }
  return true;
}

SearchWindow::SearchWindow(Index rows, Index cols)
    : rows_(rows),
      cols_(cols),
      lo_(static_cast<std::size_t>(std::max<Index>(rows, 0)), cols),
      hi_(static_cast<std::size_t>(std::max<Index>(rows, 0)), -1) {}

SearchWindow SearchWindow::full(Index rows, Index cols) {
  SearchWindow w(rows, cols);
  for (Index i = 0; i < rows; ++i) w.include(i, 0, cols - 1);
  return w;
}

void SearchWindow::include(Index i, Index j_lo, Index j_hi) {
  if (i < 0 || i >= rows_) return;
  j_lo = std::max<Index>(j_lo, 0);
  j_hi = std::min<Index>(j_hi, cols_ - 1);
  if (j_lo > j_hi) return;
  auto& lo = lo_[static_cast<std::size_t>(i)];
  auto& hi = hi_[static_cast<std::size_t>(i)];
  lo = std::min(lo, j_lo);
  hi = std::max(hi, j_hi);
}

std::int64_t SearchWindow::cell_count() const {
  std::int64_t total = 0;
  for (Index i = 0; i < rows_; ++i) {
    if (!row_empty(i)) total += hi(i) - lo(i) + 1;
  }
  return total;
}

std::vector<WarpStep> SearchWindow::cells() const {
  std::vector<WarpStep> out;
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = lo(i); j <= hi(i); ++j) out.push_back({i, j});
  }
  return out;
}

SearchWindow detail::expand_window(const WarpPath& coarse_path, Index len_a, Index len_b, Index radius) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be >= 0");
  SearchWindow window(len_a, len_b);
  for (const auto& [ci, cj] : coarse_path) {
    // Each coarse cell owns the fine block [2ci, 2ci+1] x [2cj, 2cj+1].
    const Index i_lo = 2 * ci - radius;
    const Index i_hi = 2 * ci + 1 + radius;
    const Index j_lo = 2 * cj - radius;
    const Index j_hi = 2 * cj + 1 + radius;
    for (Index i = std::max<Index>(i_lo, 0); i <= std::min(i_hi, len_a - 1); ++i) {
      window.include(i, j_lo, j_hi);
    }
  }
  return window;
}

}  // namespace overlap
