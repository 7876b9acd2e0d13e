#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "shrinkmask/geometry/polygon.hpp"
#include "shrinkmask/raster/grid.hpp"

namespace shrinkmask {

/// Sets pixels of `mask` whose centres fall inside `poly` (even-odd rule).
/// Pixel (row, col) of the mask maps to global pixel (origin_y + row, origin_x + col).
inline void rasterize_into(BitMask& mask, const Polygon& poly, int origin_x = 0, int origin_y = 0) {
    struct ActiveEdge {
        double y0, y1, x0, slope;
    };
    const auto v = poly.vertices();
    std::vector<ActiveEdge> edges;
    edges.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        if (a.y == b.y) continue;
        const Point2& lo = a.y < b.y ? a : b;
        const Point2& hi = a.y < b.y ? b : a;
        edges.push_back({lo.y, hi.y, lo.x, (hi.x - lo.x) / (hi.y - lo.y)});
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.y0 < b.y0; });

    const auto& bb = poly.bounds();
    const int w = mask.width();
    const int h = mask.height();
    // Local rows whose centres can lie inside the polygon.
    const int row_lo = std::max(0, static_cast<int>(std::floor(bb.min_y - origin_y - 0.5)));
    const int row_hi = std::min(h - 1, static_cast<int>(std::ceil(bb.max_y - origin_y - 0.5)));

    std::vector<const ActiveEdge*> active;
    std::vector<double> xs;
    std::size_t next = 0;
    for (int row = row_lo; row <= row_hi; ++row) {
        const double yc = origin_y + row + 0.5;
        while (next < edges.size() && edges[next].y0 <= yc) active.push_back(&edges[next++]);
        std::erase_if(active, [yc](const ActiveEdge* e) { return e->y1 <= yc; });
        xs.clear();
        for (const ActiveEdge* e : active) {
            if (e->y0 <= yc && yc < e->y1) xs.push_back(e->x0 + (yc - e->y0) * e->slope);
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Pixel col is set when xs[k] <= origin_x + col + 0.5 < xs[k+1].
            const int c0 = std::max(0, static_cast<int>(std::ceil(xs[k] - origin_x - 0.5)));
            const int c1 = std::min(w, static_cast<int>(std::ceil(xs[k + 1] - origin_x - 0.5)));
            for (int col = c0; col < c1; ++col) mask(row, col) = 1;
        }
    }
}

[[nodiscard]] inline BitMask rasterize(const Polygon& poly, int width, int height) {
    BitMask mask(width, height, 0);
    rasterize_into(mask, poly);
    return mask;
}

/// Pixel window of the image covering a polygon's centre-sampled footprint plus `margin`,
/// clipped to the image. Empty (w or h <= 0) when the polygon misses the image.
struct PixelWindow {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    [[nodiscard]] bool empty() const { return w <= 0 || h <= 0; }
};

[[nodiscard]] inline PixelWindow footprint(const BoundingBox& bb, int width, int height, int margin) {
    PixelWindow win;
    const int c0 = std::max(0, static_cast<int>(std::floor(bb.min_x - 0.5)) - margin);
    const int r0 = std::max(0, static_cast<int>(std::floor(bb.min_y - 0.5)) - margin);
    const int c1 = std::min(width - 1, static_cast<int>(std::ceil(bb.max_x - 0.5)) + margin);
    const int r1 = std::min(height - 1, static_cast<int>(std::ceil(bb.max_y - 0.5)) + margin);
    win.x0 = c0;
    win.y0 = r0;
    win.w = c1 - c0 + 1;
    win.h = r1 - r0 + 1;
    return win;
}

}  // namespace shrinkmask
