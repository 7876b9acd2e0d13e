#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "shrinkmask/detection.hpp"
#include "shrinkmask/labelgen.hpp"

namespace shrinkmask::io {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kGroundTruthColor{0, 200, 0};
inline constexpr Rgb kAdaptiveColor{40, 90, 255};
inline constexpr Rgb kFixedColor{230, 30, 30};
inline constexpr Rgb kIgnoreColor{110, 110, 110};

class Canvas {
public:
    Canvas(int width, int height, Rgb background = {16, 16, 16})
        : w_(width), h_(height), px_(static_cast<std::size_t>(width) * height, background) {
        if (width <= 0 || height <= 0) throw InvalidArgument("canvas size must be positive");
    }

    void plot(int x, int y, Rgb c) {
        if (x >= 0 && y >= 0 && x < w_ && y < h_) px_[static_cast<std::size_t>(y) * w_ + x] = c;
    }

    /// Straight line between two real points, sampled at half-pixel steps.
    void line(Point2 a, Point2 b, Rgb c) {
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * len)));
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            plot(static_cast<int>(std::floor(a.x + t * (b.x - a.x))), static_cast<int>(std::floor(a.y + t * (b.y - a.y))), c);
        }
    }

    void outline(const Polygon& p, Rgb c) {
        for (std::size_t i = 0; i < p.size(); ++i) line(p[i], p[(i + 1) % p.size()], c);
    }

    /// Binary PPM (P6).
    void write_ppm(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << "P6\n" << w_ << ' ' << h_ << "\n255\n";
        for (const auto& c : px_) out.write(reinterpret_cast<const char*>(c.data()), 3);
        if (!out) throw Error("write failed: " + path.string());
    }

    [[nodiscard]] Rgb at(int x, int y) const { return px_[static_cast<std::size_t>(y) * w_ + x]; }

private:
    int w_, h_;
    std::vector<Rgb> px_;
};

/// Overlay of ground truth (green), DO-NOT-CARE regions (grey) and detections coloured by
/// extension mode (adaptive blue, fixed red).
[[nodiscard]] inline Canvas render_overlay(const SceneAnnotation& ann, std::span<const Detection> dets) {
    Canvas canvas(ann.width, ann.height);
    for (const auto& p : ann.ignores) canvas.outline(p, kIgnoreColor);
    for (const auto& p : ann.texts) canvas.outline(p, kGroundTruthColor);
    for (const auto& d : dets) canvas.outline(d.contour, d.mode == ExtendMode::Adaptive ? kAdaptiveColor : kFixedColor);
    return canvas;
}

}  // namespace shrinkmask::io
