#pragma once

#include <algorithm>
#include <vector>

#include "shrinkmask/geometry/clipping.hpp"
#include "shrinkmask/geometry/polygon.hpp"

namespace shrinkmask {

namespace detail {

inline clip::BooleanResult combine(const Polygon& a, const Polygon& b, bool intersect, bool rings) {
    clip::Arrangement arr;
    arr.add_polygon(a, 0);
    arr.add_polygon(b, 1);
    if (intersect) {
        return arr.evaluate([](clip::Winding w) { return w.a > 0 && w.b > 0; }, rings);
    }
    return arr.evaluate([](clip::Winding w) { return w.a > 0 || w.b > 0; }, rings);
}

}  // namespace detail

[[nodiscard]] inline double intersection_area(const Polygon& a, const Polygon& b) {
    if (!a.bounds().overlaps(b.bounds())) return 0.0;
    return std::max(0.0, detail::combine(a, b, true, false).area);
}

[[nodiscard]] inline double union_area(const Polygon& a, const Polygon& b) {
    if (!a.bounds().overlaps(b.bounds())) return area(a) + area(b);
    return detail::combine(a, b, false, false).area;
}

/// Intersection over union; both areas come from one arrangement so the ratio is consistent.
[[nodiscard]] inline double polygon_iou(const Polygon& a, const Polygon& b) {
    if (!a.bounds().overlaps(b.bounds())) return 0.0;
    clip::Arrangement arr;
    arr.add_polygon(a, 0);
    arr.add_polygon(b, 1);
    const double inter = std::max(0.0, arr.evaluate([](clip::Winding w) { return w.a > 0 && w.b > 0; }, false).area);
    const double uni = arr.evaluate([](clip::Winding w) { return w.a > 0 || w.b > 0; }, false).area;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

/// Pieces of `poly` inside the axis-aligned rectangle [0,width]x[0,height], largest first.
[[nodiscard]] inline std::vector<Polygon> clip_to_rect(const Polygon& poly, double width, double height) {
    const auto& bb = poly.bounds();
    if (bb.min_x >= 0 && bb.min_y >= 0 && bb.max_x <= width && bb.max_y <= height) return {poly};
    const Polygon rect = make_polygon({0, 0, width, 0, width, height, 0, height});
    if (!bb.overlaps(rect.bounds())) return {};
    auto res = detail::combine(poly, rect, true, true);
    std::sort(res.outers.begin(), res.outers.end(),
              [](const auto& a, const auto& b) { return a.signed_area > b.signed_area; });
    std::vector<Polygon> out;
    for (const auto& ring : res.outers) {
        try {
            out.emplace_back(clip::to_points(ring));
        } catch (const InvalidArgument&) {
            // slivers thinner than the coordinate tolerance
        }
    }
    return out;
}

}  // namespace shrinkmask
