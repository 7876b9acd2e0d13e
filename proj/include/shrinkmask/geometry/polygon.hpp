#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "shrinkmask/error.hpp"

namespace shrinkmask {

/// Vertex coincidence / orientation tolerance in pixels.
inline constexpr double kCoordEpsilon = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {
        if (!std::isfinite(x_) || !std::isfinite(y_)) {
            throw InvalidArgument("Point2: coordinates must be finite");
        }
    }

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct BoundingBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void extend(double x, double y) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
    }
    [[nodiscard]] bool overlaps(const BoundingBox& o, double eps = 0.0) const {
        return min_x <= o.max_x + eps && o.min_x <= max_x + eps && min_y <= o.max_y + eps &&
               o.min_y <= max_y + eps;
    }
    [[nodiscard]] bool empty() const { return min_x > max_x; }
};

namespace detail {

inline double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

inline double point_segment_distance(double px, double py, double ax, double ay, double bx,
                                     double by) {
    const double dx = bx - ax;
    const double dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

/// Minimum distance between segments ab and cd (0 when they properly cross).
inline double segment_distance(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double o1 = cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y);
    const double o2 = cross(b.x - a.x, b.y - a.y, d.x - a.x, d.y - a.y);
    const double o3 = cross(d.x - c.x, d.y - c.y, a.x - c.x, a.y - c.y);
    const double o4 = cross(d.x - c.x, d.y - c.y, b.x - c.x, b.y - c.y);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
        return 0.0;
    }
    return std::min({point_segment_distance(a.x, a.y, c.x, c.y, d.x, d.y),
                     point_segment_distance(b.x, b.y, c.x, c.y, d.x, d.y),
                     point_segment_distance(c.x, c.y, a.x, a.y, b.x, b.y),
                     point_segment_distance(d.x, d.y, a.x, a.y, b.x, b.y)});
}

/// Shoelace sum taken relative to the first vertex to limit cancellation.
inline double signed_area(std::span<const Point2> pts) {
    if (pts.size() < 3) return 0.0;
    const Point2 o = pts[0];
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        acc += cross(pts[i].x - o.x, pts[i].y - o.y, pts[i + 1].x - o.x, pts[i + 1].y - o.y);
    }
    return 0.5 * acc;
}

inline std::string describe_segment(std::span<const Point2> v, std::size_t i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    std::ostringstream os;
    os << "segment " << i << " (" << a.x << "," << a.y << ")-(" << b.x << "," << b.y << ")";
    return os.str();
}

/// Throws InvalidArgument naming the first offending segment pair when the ring is not simple.
inline void check_simple(std::span<const Point2> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto lo_x = [&](std::size_t i) { return std::min(v[i].x, v[(i + 1) % n].x); };
    auto hi_x = [&](std::size_t i) { return std::max(v[i].x, v[(i + 1) % n].x); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double la = lo_x(a), lb = lo_x(b);
        return la < lb || (la == lb && a < b);
    });
    for (std::size_t oi = 0; oi < n; ++oi) {
        const std::size_t i = order[oi];
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        const double ymin_i = std::min(a.y, b.y), ymax_i = std::max(a.y, b.y);
        const double xmax_i = hi_x(i);
        for (std::size_t oj = oi + 1; oj < n; ++oj) {
            const std::size_t j = order[oj];
            if (lo_x(j) > xmax_i + kCoordEpsilon) break;
            const Point2& c = v[j];
            const Point2& d = v[(j + 1) % n];
            if (std::min(c.y, d.y) > ymax_i + kCoordEpsilon ||
                std::max(c.y, d.y) < ymin_i - kCoordEpsilon) {
                continue;
            }
            const bool adjacent = (j == (i + 1) % n) || (i == (j + 1) % n);
            if (adjacent) {
                // The shared vertex is expected; only a collinear fold-back overlaps.
                const bool i_first = j == (i + 1) % n;
                const Point2& s = i_first ? a : c;
                const Point2& m = i_first ? b : d;
                const Point2& e = i_first ? d : b;
                const double cr = cross(m.x - s.x, m.y - s.y, e.x - m.x, e.y - m.y);
                const double dt = (m.x - s.x) * (e.x - m.x) + (m.y - s.y) * (e.y - m.y);
                const double scale = std::max(std::hypot(m.x - s.x, m.y - s.y),
                                              std::hypot(e.x - m.x, e.y - m.y));
                if (std::abs(cr) <= kCoordEpsilon * scale && dt < 0) {
                    throw InvalidArgument("polygon is not simple: " + describe_segment(v, i) +
                                          " folds back onto " + describe_segment(v, j));
                }
                continue;
            }
            if (segment_distance(a, b, c, d) <= kCoordEpsilon) {
                throw InvalidArgument("polygon is not simple: " + describe_segment(v, i) +
                                      " intersects " + describe_segment(v, j));
            }
        }
    }
}

}  // namespace detail

/// Closed simple ring of pixel-space points, stored counter-clockwise (positive shoelace area).
class Polygon {
public:
    explicit Polygon(std::vector<Point2> vertices) : v_(std::move(vertices)) {
        if (v_.size() < 3) {
            throw InvalidArgument("polygon needs at least 3 vertices, got " +
                                  std::to_string(v_.size()));
        }
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const auto& a = v_[i];
            const auto& b = v_[(i + 1) % v_.size()];
            if (std::abs(a.x - b.x) <= kCoordEpsilon && std::abs(a.y - b.y) <= kCoordEpsilon) {
                throw InvalidArgument("polygon has coincident consecutive vertices at index " +
                                      std::to_string(i));
            }
        }
        detail::check_simple(v_);
        const double sa = detail::signed_area(v_);
        if (std::abs(sa) <= kCoordEpsilon * kCoordEpsilon) {
            throw InvalidArgument("polygon has zero area");
        }
        if (sa < 0) std::reverse(v_.begin(), v_.end());
        for (const auto& p : v_) box_.extend(p.x, p.y);
    }

    [[nodiscard]] std::span<const Point2> vertices() const { return v_; }
    [[nodiscard]] std::size_t size() const { return v_.size(); }
    [[nodiscard]] const Point2& operator[](std::size_t i) const { return v_[i]; }
    [[nodiscard]] const BoundingBox& bounds() const { return box_; }

    friend bool operator==(const Polygon& a, const Polygon& b) { return a.v_ == b.v_; }

private:
    std::vector<Point2> v_;
    BoundingBox box_;
};

/// Builds a polygon from a flat x0,y0,x1,y1,... list.
inline Polygon make_polygon(std::initializer_list<double> xy) {
    if (xy.size() % 2 != 0) throw InvalidArgument("odd coordinate count");
    std::vector<Point2> pts;
    pts.reserve(xy.size() / 2);
    for (auto it = xy.begin(); it != xy.end(); it += 2) pts.emplace_back(*it, *(it + 1));
    return Polygon(std::move(pts));
}

[[nodiscard]] inline double area(const Polygon& poly) { return detail::signed_area(poly.vertices()); }

[[nodiscard]] inline double perimeter(const Polygon& poly) {
    const auto v = poly.vertices();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        acc += std::hypot(b.x - a.x, b.y - a.y);
    }
    return acc;
}

/// Even-odd point containment; points exactly on the boundary may go either way.
[[nodiscard]] inline bool contains(const Polygon& poly, double x, double y) {
    const auto v = poly.vertices();
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > y) != (v[j].y > y)) {
            const double xi = v[i].x + (y - v[i].y) * (v[j].x - v[i].x) / (v[j].y - v[i].y);
            if (x < xi) inside = !inside;
        }
    }
    return inside;
}

/// Minimum distance between the regions of two polygons; 0 when they touch, cross or nest.
[[nodiscard]] inline double distance(const Polygon& a, const Polygon& b) {
    if (contains(b, a[0].x, a[0].y) || contains(a, b[0].x, b[0].y)) return 0.0;
    const auto va = a.vertices();
    const auto vb = b.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < va.size(); ++i) {
        const Point2& p = va[i];
        const Point2& q = va[(i + 1) % va.size()];
        for (std::size_t j = 0; j < vb.size(); ++j) {
            best = std::min(best, detail::segment_distance(p, q, vb[j], vb[(j + 1) % vb.size()]));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

}  // namespace shrinkmask
