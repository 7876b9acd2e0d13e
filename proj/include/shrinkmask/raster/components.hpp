#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "shrinkmask/error.hpp"
#include "shrinkmask/geometry/polygon.hpp"
#include "shrinkmask/raster/grid.hpp"

namespace shrinkmask {

enum class Connectivity { Four = 4, Eight = 8 };

/// Connected-component labelling of a mask; label 0 is background.
struct ComponentLabels {
    Grid<std::uint32_t> labels;
    std::uint32_t count = 0;
    Connectivity connectivity = Connectivity::Eight;
    /// Row-major index of the first pixel of each component (index 0 belongs to label 1).
    std::vector<std::size_t> first_pixel;

    [[nodiscard]] int width() const { return labels.width(); }
    [[nodiscard]] int height() const { return labels.height(); }
};

/// Components are numbered in the order their first pixel appears in row-major order.
[[nodiscard]] inline ComponentLabels connected_components(const BitMask& mask,
                                                          Connectivity conn = Connectivity::Eight) {
    const int w = mask.width(), h = mask.height();
    ComponentLabels out{Grid<std::uint32_t>(w, h, 0u), 0, conn, {}};
    std::vector<std::size_t> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t idx = mask.index(r, c);
            if (!mask[idx] || out.labels[idx] != 0) continue;
            const std::uint32_t id = ++out.count;
            out.first_pixel.push_back(idx);
            out.labels[idx] = id;
            stack.push_back(idx);
            while (!stack.empty()) {
                const std::size_t p = stack.back();
                stack.pop_back();
                const int pr = static_cast<int>(p / w), pc = static_cast<int>(p % w);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        if (conn == Connectivity::Four && dr != 0 && dc != 0) continue;
                        const int nr = pr + dr, nc = pc + dc;
                        if (nr < 0 || nc < 0 || nr >= h || nc >= w) continue;
                        const std::size_t q = mask.index(nr, nc);
                        if (mask[q] && out.labels[q] == 0) {
                            out.labels[q] = id;
                            stack.push_back(q);
                        }
                    }
                }
            }
        }
    }
    return out;
}

/// Offset applied to a lattice corner that the boundary passes through twice, so the
/// traced ring stays simple. Far below half a pixel, so pixel-centre sampling is unaffected.
inline constexpr double kPinchOffset = 1.0 / 1024.0;

/// Outer boundary of component `id`, following pixel cracks on the corner lattice.
///
/// The ring is counter-clockwise with straight runs merged. Rasterizing it reproduces the
/// component's pixels with any enclosed holes filled.
[[nodiscard]] inline Polygon trace_contour(const ComponentLabels& cl, std::uint32_t id) {
    if (id == 0 || id > cl.count) {
        throw UnknownComponent("component " + std::to_string(id) + " not in [1, " +
                               std::to_string(cl.count) + "]");
    }
    const int w = cl.width(), h = cl.height();
    auto fg = [&](int col, int row) {
        return col >= 0 && row >= 0 && col < w && row < h && cl.labels(row, col) == id;
    };
    const bool eight = cl.connectivity == Connectivity::Eight;

    const std::size_t start = cl.first_pixel[id - 1];
    const int x0 = static_cast<int>(start % w), y0 = static_cast<int>(start / w);

    struct Turn {
        int x, y;
        int dx_in, dy_in, dx_out, dy_out;
    };
    std::vector<Turn> turns;
    // Walk with the component on the left, i.e. on side n = (-dy, dx) of the direction.
    int px = x0 + 1, py = y0;
    int dx = 1, dy = 0;
    while (true) {
        const int nx = -dy, ny = dx;
        // Pixel centres ahead of the corner on the component side and on the other side,
        // scaled by 2 to stay on integers: centre = P + (d +/- n) / 2.
        const int fcx = 2 * px + dx + nx, fcy = 2 * py + dy + ny;
        const int ocx = 2 * px + dx - nx, ocy = 2 * py + dy - ny;
        const bool f_in = fg((fcx - 1) / 2, (fcy - 1) / 2);
        const bool o_in = fg((ocx - 1) / 2, (ocy - 1) / 2);
        int ndx, ndy;
        bool turn_other;
        if (eight) {
            turn_other = o_in;
        } else {
            turn_other = f_in && o_in;
        }
        if (turn_other) {
            ndx = -nx;
            ndy = -ny;
        } else if (f_in) {
            ndx = dx;
            ndy = dy;
        } else {
            ndx = nx;
            ndy = ny;
        }
        if (ndx != dx || ndy != dy) turns.push_back({px, py, dx, dy, ndx, ndy});
        if (px == x0 && py == y0 && ndx == 1 && ndy == 0) break;
        px += ndx;
        py += ndy;
        dx = ndx;
        dy = ndy;
    }

    std::unordered_map<std::int64_t, int> visits;
    auto key = [](int x, int y) { return (static_cast<std::int64_t>(x) << 32) ^ static_cast<std::uint32_t>(y); };
    for (const auto& t : turns) ++visits[key(t.x, t.y)];
    std::vector<Point2> pts;
    pts.reserve(turns.size());
    for (const auto& t : turns) {
        double x = t.x, y = t.y;
        if (visits[key(t.x, t.y)] > 1) {
            x += kPinchOffset * (t.dx_out - t.dx_in);
            y += kPinchOffset * (t.dy_out - t.dy_in);
        }
        pts.emplace_back(x, y);
    }
    return Polygon(std::move(pts));
}

}  // namespace shrinkmask
