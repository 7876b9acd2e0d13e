#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "shrinkmask/error.hpp"
#include "shrinkmask/geometry/clipping.hpp"
#include "shrinkmask/geometry/polygon.hpp"

namespace shrinkmask {

/// Shrinking coefficient used when generating shrink-mask labels.
struct ShrinkParams {
    double delta_s = 0.4;

    explicit ShrinkParams(double d = 0.4) : delta_s(d) {
        if (!(d > 0.0 && d < 1.0)) {
            throw InvalidArgument("delta_s must lie in (0,1), got " + std::to_string(d));
        }
    }
};

/// Extending coefficient of the fixed-offset baseline.
struct FixedExtendParams {
    double delta_t = 1.5;

    explicit FixedExtendParams(double d = 1.5) : delta_t(d) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw InvalidArgument("delta_t must be non-negative, got " + std::to_string(d));
        }
    }
};

struct OffsetOptions {
    /// Miter length over |delta| beyond which a corner is squared off at |delta|.
    double miter_limit = 2.0;
};

/// o_s = (area / perimeter) * (1 - delta_s^2)
[[nodiscard]] inline double shrink_offset(const Polygon& poly, const ShrinkParams& params) {
    return area(poly) / perimeter(poly) * (1.0 - params.delta_s * params.delta_s);
}

/// o_f = (area / perimeter) * delta_t
[[nodiscard]] inline double fixed_offset(const Polygon& poly, const FixedExtendParams& params) {
    return area(poly) / perimeter(poly) * params.delta_t;
}

namespace detail {

/// Offset outline before self-overlaps are resolved: shifted edges joined by miters or squared corners
/// at outer corners, and routed through the original vertex at inner corners.
inline std::vector<clip::Vec> raw_offset_path(const Polygon& poly, double delta, const OffsetOptions& opt) {
    const auto v = poly.vertices();
    const std::size_t n = v.size();
    std::vector<clip::Vec> normals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const clip::Vec d{v[(i + 1) % n].x - v[i].x, v[(i + 1) % n].y - v[i].y};
        const double len = clip::norm(d);
        normals[i] = {d.y / len, -d.x / len};  // outward for a CCW ring
    }
    std::vector<clip::Vec> path;
    path.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const clip::Vec p{v[i].x, v[i].y};
        const clip::Vec n0 = normals[(i + n - 1) % n];
        const clip::Vec n1 = normals[i];
        const double sin_a = clip::cross(n0, n1);
        const double cos_a = clip::dot(n0, n1);
        if (std::abs(sin_a) < 1e-12 && cos_a > 0) {
            path.push_back(p + n1 * delta);
        } else if (sin_a * delta < 0) {
            path.push_back(p + n0 * delta);
            path.push_back(p);
            path.push_back(p + n1 * delta);
        } else {
            const double ratio = std::sqrt(2.0 / (1.0 + cos_a));
            if (cos_a > -1.0 + 1e-12 && ratio <= opt.miter_limit) {
                path.push_back(p + (n0 + n1) * (delta / (1.0 + cos_a)));
            } else {
                // square the corner off at |delta| from the vertex along the bisector
                clip::Vec b = n0 + n1;
                const double bl = clip::norm(b);
                b = bl > 1e-9 ? b * (1.0 / bl) : clip::Vec{-n0.y, n0.x};
                for (const clip::Vec& ni : {n0, n1}) {
                    const clip::Vec dir{-ni.y, ni.x};
                    const double t = delta * (1.0 - clip::dot(ni, b)) / clip::dot(dir, b);
                    path.push_back(p + ni * delta + dir * t);
                }
            }
        }
    }
    return path;
}

}  // namespace detail

/// Moves every edge of `poly` by `delta` along its outward normal (negative shrinks).
///
/// Shrinking may split the polygon into several parts; expanding closes any enclosed gaps
/// so only outer boundaries are returned. Parts come back largest first.
/// Throws EmptyResult when shrinking consumes the whole polygon.
[[nodiscard]] inline std::vector<Polygon> offset_polygon(const Polygon& poly, double delta,
                                                         const OffsetOptions& opt = {}) {
    if (!std::isfinite(delta)) throw InvalidArgument("offset delta must be finite");
    if (std::abs(delta) <= kCoordEpsilon) return {poly};

    clip::Arrangement arr;
    arr.add_ring(detail::raw_offset_path(poly, delta, opt), 0);
    auto res = arr.evaluate([](clip::Winding w) { return w.a > 0; }, true);
    std::sort(res.outers.begin(), res.outers.end(),
              [](const auto& a, const auto& b) { return a.signed_area > b.signed_area; });

    std::vector<Polygon> out;
    for (const auto& ring : res.outers) {
        if (ring.signed_area <= kCoordEpsilon) continue;
        try {
            out.emplace_back(clip::to_points(ring));
        } catch (const InvalidArgument&) {
            // degenerate sliver below the coordinate tolerance
        }
    }
    if (out.empty()) {
        throw EmptyResult("polygon collapses under offset " + std::to_string(delta));
    }
    return out;
}

}  // namespace shrinkmask
