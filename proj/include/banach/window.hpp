#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "banach/group.hpp"
#include "banach/rational.hpp"

namespace banach {

enum class ShapeKind { Box, CrossPolytope, PolytopeHull };

/// Convex body K used to build the window family rK.
struct WindowShape {
  ShapeKind kind = ShapeKind::Box;
  std::vector<std::vector<Rational>> vertices;  // PolytopeHull only

  static WindowShape box() { return {ShapeKind::Box, {}}; }
  static WindowShape cross_polytope() { return {ShapeKind::CrossPolytope, {}}; }
  static WindowShape hull(std::vector<std::vector<Rational>> vertices) {
    return {ShapeKind::PolytopeHull, std::move(vertices)};
  }

  friend bool operator==(const WindowShape&, const WindowShape&) = default;
};

const char* to_string(ShapeKind kind) noexcept;

/// A shape compiled for Z^d.
///
/// Box at scale r is the set of integer points of r*[-1/2, 1/2)^d, so it has
/// exactly r points per side. CrossPolytope is the closed l1 ball of radius r.
/// PolytopeHull (d <= 2) is the dilated convex hull of the vertices, tested by
/// exact integer facet inequalities a.x <= r*b; the hull must be centrally
/// symmetric with 0 in its interior.
class LatticeShape {
 public:
  LatticeShape(const WindowShape& shape, std::size_t dimension);

  std::size_t dimension() const noexcept { return dim_; }
  ShapeKind kind() const noexcept { return kind_; }

  bool contains(std::span<const std::int64_t> x, std::int64_t r) const;

  /// Per-coordinate bounds [lo, hi] enclosing rK.
  std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> bounds(std::int64_t r) const;

  /// Calls f(std::span<const std::int64_t>) for each point of rK in
  /// lexicographic order.
  template <class F>
  void for_each_point(std::int64_t r, F&& f) const {
    auto [lo, hi] = bounds(r);
    std::vector<std::int64_t> x = lo;
    for (std::size_t i = 0; i < dim_; ++i)
      if (lo[i] > hi[i]) return;
    while (true) {
      if (contains(x, r)) f(std::span<const std::int64_t>(x));
      std::size_t i = dim_;
      while (i-- > 0) {
        if (x[i] < hi[i]) {
          ++x[i];
          break;
        }
        x[i] = lo[i];
      }
      if (i == static_cast<std::size_t>(-1)) return;
    }
  }

  std::vector<Element> points(std::int64_t r) const;
  std::int64_t count(std::int64_t r) const;

 private:
  struct Facet {
    std::vector<std::int64_t> normal;
    std::int64_t rhs = 0;  // a.x <= r * rhs
  };

  ShapeKind kind_;
  std::size_t dim_;
  std::vector<Facet> facets_;
  std::vector<Rational> vmin_, vmax_;
};

}  // namespace banach
