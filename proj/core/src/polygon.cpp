#include "dewet/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dewet/errors.hpp"

namespace dewet::polygon {

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  if (orient(a, b, p) != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  if (((o1 > 0) != (o2 > 0)) && o1 != 0 && o2 != 0 && ((o3 > 0) != (o4 > 0)) &&
      o3 != 0 && o4 != 0)
    return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
         on_segment(c, d, b);
}

// Inside or on the boundary of a CCW triangle. Boundary points must block
// ear clipping: a reflex vertex sitting exactly on the candidate diagonal
// (pinched polygons) would otherwise produce overlapping triangles.
bool point_blocks_ear(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

// Sutherland-Hodgman clip against the left half-plane of edge a->b.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 a, Vec2 b) {
  std::vector<Vec2> out;
  out.reserve(poly.size() + 2);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 cur = poly[i];
    const Vec2 nxt = poly[(i + 1) % n];
    const double dc = orient(a, b, cur);
    const double dn = orient(a, b, nxt);
    if (dc >= 0.0) out.push_back(cur);
    if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
      const double t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

struct Box {
  double xmin, xmax, ymin, ymax;
  bool overlaps(const Box& o) const {
    return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
  }
};

Box bounding_box(const std::array<Vec2, 3>& t) {
  Box b{t[0].x, t[0].x, t[0].y, t[0].y};
  for (int i = 1; i < 3; ++i) {
    b.xmin = std::min(b.xmin, t[i].x);
    b.xmax = std::max(b.xmax, t[i].x);
    b.ymin = std::min(b.ymin, t[i].y);
    b.ymax = std::max(b.ymax, t[i].y);
  }
  return b;
}

double tri_tri_area(const std::array<Vec2, 3>& s, const std::array<Vec2, 3>& c) {
  std::vector<Vec2> poly(s.begin(), s.end());
  for (int i = 0; i < 3 && !poly.empty(); ++i)
    poly = clip_half_plane(poly, c[i], c[(i + 1) % 3]);
  if (poly.size() < 3) return 0.0;
  return std::abs(signed_area(poly));
}

}  // namespace

double signed_area(std::span<const Vec2> poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

bool is_simple(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

std::vector<std::array<Vec2, 3>> triangulate(std::vector<Vec2> poly) {
  std::vector<std::array<Vec2, 3>> tris;
  if (poly.size() < 3) return tris;
  tris.reserve(poly.size() - 2);

  // scale-aware tolerance for collinearity
  double scale = 0.0;
  for (const Vec2& p : poly) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double tol = 1e-14 * scale * scale;

  while (poly.size() > 3) {
    const std::size_t n = poly.size();
    bool clipped = false;
    // degenerate (collinear) ears first: removing them never changes the region
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = poly[(i + n - 1) % n];
      const Vec2 b = poly[i];
      const Vec2 c = poly[(i + 1) % n];
      if (std::abs(orient(a, b, c)) <= tol) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
    }
    if (clipped) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = poly[(i + n - 1) % n];
      const Vec2 b = poly[i];
      const Vec2 c = poly[(i + 1) % n];
      if (orient(a, b, c) <= 0.0) continue;  // reflex corner
      bool ear = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        if (point_blocks_ear(poly[j], a, b, c)) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      tris.push_back({a, b, c});
      poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw Error("triangulate: no ear found (degenerate polygon)");
  }
  if (std::abs(orient(poly[0], poly[1], poly[2])) > tol)
    tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

double intersection_area(std::span<const Vec2> p, std::span<const Vec2> q) {
  std::vector<Vec2> pv(p.begin(), p.end());
  std::vector<Vec2> qv(q.begin(), q.end());
  if (signed_area(pv) < 0.0) std::reverse(pv.begin(), pv.end());
  if (signed_area(qv) < 0.0) std::reverse(qv.begin(), qv.end());
  const auto pt = triangulate(std::move(pv));
  const auto qt = triangulate(std::move(qv));
  std::vector<Box> qb;
  qb.reserve(qt.size());
  for (const auto& t : qt) qb.push_back(bounding_box(t));
  double area = 0.0;
  for (const auto& tp : pt) {
    const Box bp = bounding_box(tp);
    for (std::size_t j = 0; j < qt.size(); ++j) {
      if (!bp.overlaps(qb[j])) continue;
      area += tri_tri_area(tp, qt[j]);
    }
  }
  return area;
}

double symmetric_difference_area(std::span<const Vec2> p, std::span<const Vec2> q) {
  const double ap = std::abs(signed_area(p));
  const double aq = std::abs(signed_area(q));
  return ap + aq - 2.0 * intersection_area(p, q);
}

bool point_in_polygon(Vec2 pt, std::span<const Vec2> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > pt.y) != (b.y > pt.y)) {
      const double xi = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (pt.x < xi) inside = !inside;
    }
  }
  return inside;
}

double symmetric_difference_area_grid(std::span<const Vec2> p,
                                      std::span<const Vec2> q, int cells) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Vec2& v : p) {
    xmin = std::min(xmin, v.x); xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y); ymax = std::max(ymax, v.y);
  }
  for (const Vec2& v : q) {
    xmin = std::min(xmin, v.x); xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y); ymax = std::max(ymax, v.y);
  }
  auto estimate = [&](int k) {
    const double dx = (xmax - xmin) / k;
    const double dy = (ymax - ymin) / k;
    long count = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const Vec2 c{xmin + (i + 0.5) * dx, ymin + (j + 0.5) * dy};
        if (point_in_polygon(c, p) != point_in_polygon(c, q)) ++count;
      }
    return count * dx * dy;
  };
  const double coarse = estimate(cells);
  const double fine = estimate(2 * cells);
  return 2.0 * fine - coarse;
}

}  // namespace dewet::polygon
