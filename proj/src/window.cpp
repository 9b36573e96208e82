#include "banach/window.hpp"

#include <algorithm>
#include <numeric>

#include "banach/error.hpp"

namespace banach {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

using Point = std::vector<Rational>;

Rational cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= Rational(0)) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= Rational(0)) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

const char* to_string(ShapeKind kind) noexcept {
  switch (kind) {
    case ShapeKind::Box: return "box";
    case ShapeKind::CrossPolytope: return "cross";
    case ShapeKind::PolytopeHull: return "hull";
  }
  return "?";
}

LatticeShape::LatticeShape(const WindowShape& shape, std::size_t dimension) : kind_(shape.kind), dim_(dimension) {
  if (dim_ < 1) fail(ErrorKind::InvalidSpec, "window dimension must be >= 1");
  if (kind_ != ShapeKind::PolytopeHull) return;

  if (dim_ > 2) fail(ErrorKind::Unsupported, "polytope hull windows are implemented for d <= 2");
  if (shape.vertices.empty()) fail(ErrorKind::InvalidSpec, "polytope hull needs vertices");
  for (const auto& v : shape.vertices)
    if (v.size() != dim_) fail(ErrorKind::InvalidSpec, "hull vertex dimension mismatch");

  std::vector<Point> hull;
  if (dim_ == 1) {
    auto [mn, mx] = std::minmax_element(shape.vertices.begin(), shape.vertices.end());
    hull = {*mn, *mx};
    facets_.push_back({{(*mx)[0].den()}, (*mx)[0].num()});
    facets_.push_back({{-(*mn)[0].den()}, -(*mn)[0].num()});
  } else {
    hull = convex_hull(shape.vertices);
    if (hull.size() < 3) fail(ErrorKind::InvalidSpec, "polytope hull is not full-dimensional");
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& p = hull[i];
      const auto& q = hull[(i + 1) % hull.size()];
      // Outward normal of a counter-clockwise edge p -> q.
      const Rational nx = q[1] - p[1];
      const Rational ny = p[0] - q[0];
      const Rational b = nx * p[0] + ny * p[1];
      const std::int64_t l = std::lcm(std::lcm(nx.den(), ny.den()), b.den());
      facets_.push_back({{(nx * l).num(), (ny * l).num()}, (b * l).num()});
    }
  }
  for (const auto& f : facets_)
    if (f.rhs <= 0) fail(ErrorKind::InvalidSpec, "polytope hull must contain 0 in its interior");

  std::vector<Point> negated;
  for (const auto& v : hull) {
    Point n;
    for (const auto& c : v) n.push_back(-c);
    negated.push_back(std::move(n));
  }
  std::vector<Point> sorted_hull = hull;
  std::sort(sorted_hull.begin(), sorted_hull.end());
  std::sort(negated.begin(), negated.end());
  if (sorted_hull != negated) fail(ErrorKind::InvalidSpec, "polytope hull must be centrally symmetric");

  vmin_.assign(dim_, Rational(0));
  vmax_.assign(dim_, Rational(0));
  for (const auto& v : hull)
    for (std::size_t i = 0; i < dim_; ++i) {
      vmin_[i] = std::min(vmin_[i], v[i]);
      vmax_[i] = std::max(vmax_[i], v[i]);
    }
}

bool LatticeShape::contains(std::span<const std::int64_t> x, std::int64_t r) const {
  switch (kind_) {
    case ShapeKind::Box: {
      const std::int64_t lo = -(r / 2);
      const std::int64_t hi = r - 1 - r / 2;
      return std::all_of(x.begin(), x.end(), [&](std::int64_t c) { return lo <= c && c <= hi; });
    }
    case ShapeKind::CrossPolytope: {
      std::int64_t s = 0;
      for (auto c : x) s += c < 0 ? -c : c;
      return s <= r;
    }
    case ShapeKind::PolytopeHull:
      for (const auto& f : facets_) {
        __int128 lhs = 0;
        for (std::size_t i = 0; i < dim_; ++i) lhs += static_cast<__int128>(f.normal[i]) * x[i];
        if (lhs > static_cast<__int128>(r) * f.rhs) return false;
      }
      return true;
  }
  return false;
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> LatticeShape::bounds(std::int64_t r) const {
  std::vector<std::int64_t> lo(dim_), hi(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    switch (kind_) {
      case ShapeKind::Box:
        lo[i] = -(r / 2);
        hi[i] = r - 1 - r / 2;
        break;
      case ShapeKind::CrossPolytope:
        lo[i] = -r;
        hi[i] = r;
        break;
      case ShapeKind::PolytopeHull: {
        const Rational a = vmin_[i] * Rational(r);
        const Rational b = vmax_[i] * Rational(r);
        lo[i] = a.floor();
        hi[i] = ceil_div(b.num(), b.den());
        break;
      }
    }
  }
  return {lo, hi};
}

std::vector<Element> LatticeShape::points(std::int64_t r) const {
  std::vector<Element> out;
  for_each_point(r, [&](std::span<const std::int64_t> x) { out.push_back(Element::of(std::vector<std::int64_t>(x.begin(), x.end()))); });
  return out;
}

std::int64_t LatticeShape::count(std::int64_t r) const {
  std::int64_t n = 0;
  for_each_point(r, [&](std::span<const std::int64_t>) { ++n; });
  return n;
}

}  // namespace banach
