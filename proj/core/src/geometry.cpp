#include "noma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "noma/errors.hpp"

namespace noma {

Window::Window(double half_width_, double margin_) : half_width(half_width_), margin(margin_) {
  if (!(half_width > 0.0)) throw ParamError("window.half_width", "must be > 0");
  if (!(margin >= 0.0 && margin < half_width)) {
    throw ParamError("window.margin", "must lie in [0, half_width)");
  }
}

bool Window::contains(Point p) const noexcept {
  return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width;
}

bool Window::in_inner(Point p) const noexcept {
  const double inner = half_width - margin;
  return std::abs(p.x) <= inner && std::abs(p.y) <= inner;
}

Window Window::for_intensity(double total_bs_intensity, double min_expected_bs,
                             double margin_radii) {
  if (!(total_bs_intensity > 0.0)) throw ParamError("intensity", "must be > 0");
  const double half_width = 0.5 * std::sqrt(min_expected_bs / total_bs_intensity);
  const double margin = margin_radii / std::sqrt(std::numbers::pi * total_bs_intensity);
  return Window(half_width, margin);
}

PointSet sample_ppp(double intensity, const Window& window, std::mt19937_64& rng, int tag) {
  if (!(intensity >= 0.0)) throw ParamError("intensity", "must be >= 0");
  PointSet set;
  set.tag = tag;
  if (intensity == 0.0) return set;
  std::poisson_distribution<std::uint64_t> count(intensity * window.area());
  const std::uint64_t n = count(rng);
  std::uniform_real_distribution<double> coord(-window.half_width, window.half_width);
  set.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    set.points.push_back({x, y});
  }
  return set;
}

GridIndex::GridIndex(std::span<const Point> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) return;
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("GridIndex: too many points");
  }
  double max_x = points_[0].x, max_y = points_[0].y;
  min_x_ = points_[0].x;
  min_y_ = points_[0].y;
  for (const auto& p : points_) {
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double width = std::max(max_x - min_x_, 1e-9);
  const double height = std::max(max_y - min_y_, 1e-9);
  // About two points per cell.
  cell_size_ = std::sqrt(2.0 * width * height / static_cast<double>(points_.size()));
  cell_size_ = std::max(cell_size_, 1e-9);
  cols_ = std::max<std::size_t>(1, static_cast<std::size_t>(width / cell_size_) + 1);
  rows_ = std::max<std::size_t>(1, static_cast<std::size_t>(height / cell_size_) + 1);

  std::vector<std::uint32_t> counts(cols_ * rows_ + 1, 0);
  std::vector<std::size_t> cell(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    cell[i] = cell_of(points_[i].y, min_y_, rows_) * cols_ + cell_of(points_[i].x, min_x_, cols_);
    ++counts[cell[i] + 1];
  }
  for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
  cell_start_ = counts;
  cell_items_.resize(points_.size());
  // Insertion in index order keeps each bucket ascending.
  for (std::size_t i = 0; i < points_.size(); ++i) {
    cell_items_[counts[cell[i]]++] = static_cast<std::uint32_t>(i);
  }
}

std::size_t GridIndex::cell_of(double coord, double origin, std::size_t count) const noexcept {
  const double f = (coord - origin) / cell_size_;
  if (!(f > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(f), count - 1);
}

std::size_t GridIndex::nearest(Point query) const {
  if (points_.empty()) throw std::logic_error("GridIndex::nearest on an empty index");
  const auto qc = static_cast<long>(cell_of(query.x, min_x_, cols_));
  const auto qr = static_cast<long>(cell_of(query.y, min_y_, rows_));
  const long cols = static_cast<long>(cols_);
  const long rows = static_cast<long>(rows_);

  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  const long max_ring = std::max(cols, rows);
  for (long ring = 0; ring <= max_ring; ++ring) {
    // Every unvisited cell is at least (ring - 1) * cell_size away from the
    // query, whose own cell may be a clamped edge cell.
    if (ring > 0) {
      const double reach = static_cast<double>(ring - 1) * cell_size_;
      if (reach > 0.0 && reach * reach > best_d2) break;
    }
    for (long r = qr - ring; r <= qr + ring; ++r) {
      if (r < 0 || r >= rows) continue;
      const bool edge_row = (r == qr - ring || r == qr + ring);
      for (long c = qc - ring; c <= qc + ring; c += (edge_row ? 1 : 2 * ring)) {
        if (c >= 0 && c < cols) {
          const std::size_t cell = static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c);
          for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
            const std::size_t i = cell_items_[k];
            const double d2 = squared_distance(points_[i], query);
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
              best_d2 = d2;
              best = i;
            }
          }
        }
        if (ring == 0) break;
      }
    }
  }
  return best;
}

std::vector<std::size_t> GridIndex::within(Point query, double radius) const {
  std::vector<std::size_t> out;
  if (points_.empty() || !(radius >= 0.0)) return out;
  const double r2 = radius * radius;
  const std::size_t c0 = cell_of(query.x - radius, min_x_, cols_);
  const std::size_t c1 = cell_of(query.x + radius, min_x_, cols_);
  const std::size_t r0 = cell_of(query.y - radius, min_y_, rows_);
  const std::size_t r1 = cell_of(query.y + radius, min_y_, rows_);
  for (std::size_t r = r0; r <= r1; ++r) {
    for (std::size_t c = c0; c <= c1; ++c) {
      const std::size_t cell = r * cols_ + c;
      for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
        const std::size_t i = cell_items_[k];
        if (squared_distance(points_[i], query) <= r2) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Association::tier_of(std::size_t bs) const noexcept {
  const auto it = std::upper_bound(tier_offset.begin(), tier_offset.end(), bs);
  return static_cast<std::size_t>(it - tier_offset.begin()) - 1;
}

Association associate(std::span<const PointSet> bs_sets, const PointSet& users) {
  Association assoc;
  std::vector<Point> all;
  for (const auto& set : bs_sets) {
    assoc.tier_offset.push_back(all.size());
    all.insert(all.end(), set.points.begin(), set.points.end());
  }
  if (all.empty()) throw std::invalid_argument("associate: no base station in the window");

  const GridIndex index(all);
  assoc.users_of.resize(all.size());
  assoc.serving.resize(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    const std::size_t bs = index.nearest(users.points[u]);
    assoc.serving[u] = bs;
    assoc.users_of[bs].push_back(u);
  }
  return assoc;
}

}  // namespace noma
