#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace noma {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Square sampling window [-half_width, half_width]^2. Statistics are taken
/// only from the inner square inset by `margin`.
struct Window {
  double half_width = 0.0;
  double margin = 0.0;

  Window() = default;
  Window(double half_width, double margin);

  double area() const noexcept { return 4.0 * half_width * half_width; }
  bool contains(Point p) const noexcept;
  bool in_inner(Point p) const noexcept;

  /// Smallest window holding `min_expected_bs` BSs on average, with a margin
  /// of `margin_radii` mean cell radii 1/sqrt(pi lambda).
  static Window for_intensity(double total_bs_intensity, double min_expected_bs = 2000.0,
                              double margin_radii = 5.0);
};

inline constexpr int kUserTag = -1;

struct PointSet {
  std::vector<Point> points;
  int tag = kUserTag;  // tier index, or kUserTag

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Homogeneous PPP on the window: Poisson(intensity * area) points, i.i.d.
/// uniform positions.
PointSet sample_ppp(double intensity, const Window& window, std::mt19937_64& rng,
                    int tag = kUserTag);

/// Uniform-grid bucket index over a fixed point set with exact nearest
/// neighbour and radius queries. Read-only after construction.
class GridIndex {
 public:
  GridIndex() = default;
  explicit GridIndex(std::span<const Point> points);

  std::size_t size() const noexcept { return points_.size(); }

  /// Index of the nearest point; ties go to the lowest index. Throws
  /// std::logic_error on an empty index.
  std::size_t nearest(Point query) const;

  /// Indices of all points with distance <= radius, ascending.
  std::vector<std::size_t> within(Point query, double radius) const;

 private:
  std::size_t cell_of(double coord, double origin, std::size_t count) const noexcept;

  std::vector<Point> points_;
  std::vector<std::uint32_t> cell_start_;  // CSR offsets, size cols*rows + 1
  std::vector<std::uint32_t> cell_items_;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  double cell_size_ = 1.0;
  std::size_t cols_ = 0;
  std::size_t rows_ = 0;
};

/// Nearest-BS association across all tiers. BSs are numbered globally in
/// tier-major order; `tier_offset[k]` is the first global id of tier k.
struct Association {
  std::vector<std::size_t> tier_offset;
  std::vector<std::size_t> serving;  // per user, global BS id
  std::vector<std::vector<std::size_t>> users_of;  // per global BS, ascending user ids

  std::size_t num_bs() const noexcept { return users_of.size(); }
  std::size_t tier_of(std::size_t bs) const noexcept;
  std::size_t user_count(std::size_t bs) const { return users_of[bs].size(); }
};

/// Throws std::invalid_argument when there is no BS at all.
Association associate(std::span<const PointSet> bs_sets, const PointSet& users);

}  // namespace noma
