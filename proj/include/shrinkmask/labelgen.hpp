#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "shrinkmask/geometry.hpp"
#include "shrinkmask/raster.hpp"

namespace shrinkmask {

/// Image size plus text and DO-NOT-CARE polygons.
struct SceneAnnotation {
    int width = 0;
    int height = 0;
    std::vector<Polygon> texts;
    std::vector<Polygon> ignores;
};

/// Square anchor of side `size` centred on a pixel.
struct AnchorWindow {
    Point2 center;
    int size = 32;
};

inline constexpr int kDefaultWindow = 32;
/// Shrunk parts smaller than this (px^2) are dropped.
inline constexpr double kMinShrinkPartArea = 1.0;

enum class SpwValidRegion { All, ShrinkOnly };

struct LabelMaps {
    BitMask shrink;
    FloatMap offset;
    FloatMap spw;
    BitMask ignore;
    /// Indices of texts that collapsed under shrinking and were left out of every map.
    std::vector<std::size_t> skipped;

    /// Pixels where the SPW target is supervised.
    [[nodiscard]] BitMask spw_region(SpwValidRegion mode) const {
        BitMask out(shrink.width(), shrink.height(), 0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const bool base = mode == SpwValidRegion::All ? true : shrink[i] != 0;
            out[i] = base && !ignore[i];
        }
        return out;
    }
};

struct ShrinkRegions {
    BitMask mask;
    /// Shrunk parts of each text; empty for skipped texts.
    std::vector<std::vector<Polygon>> parts;
    std::vector<std::size_t> skipped;
};

namespace detail {

/// Inclusive pixel range of a window of side `size` around index `i`, clipped to [0, n).
inline std::pair<int, int> window_range(int i, int size, int n) {
    const int lo = i - (size - 1) / 2;
    const int hi = lo + size - 1;
    return {std::max(lo, 0), std::min(hi, n - 1)};
}

/// Summed-area table with a zero first row and column.
class IntegralImage {
public:
    explicit IntegralImage(const BitMask& m) : w_(m.width() + 1), sums_(static_cast<std::size_t>(m.width() + 1) * (m.height() + 1), 0) {
        for (int r = 0; r < m.height(); ++r) {
            std::int64_t row = 0;
            for (int c = 0; c < m.width(); ++c) {
                row += m(r, c) ? 1 : 0;
                at(r + 1, c + 1) = at(r, c + 1) + row;
            }
        }
    }
    /// Count over rows [r0, r1] and cols [c0, c1], inclusive.
    [[nodiscard]] std::int64_t sum(int r0, int r1, int c0, int c1) const {
        return get(r1 + 1, c1 + 1) - get(r0, c1 + 1) - get(r1 + 1, c0) + get(r0, c0);
    }

private:
    std::int64_t& at(int r, int c) { return sums_[static_cast<std::size_t>(r) * w_ + c]; }
    [[nodiscard]] std::int64_t get(int r, int c) const { return sums_[static_cast<std::size_t>(r) * w_ + c]; }
    int w_;
    std::vector<std::int64_t> sums_;
};

inline void check_annotation(const SceneAnnotation& ann) {
    if (ann.width <= 0 || ann.height <= 0) {
        throw InvalidArgument("annotation size must be positive, got " + std::to_string(ann.width) + "x" +
                              std::to_string(ann.height));
    }
}

}  // namespace detail

/// Shrinks every text inward by its shrink offset and rasterizes the surviving parts.
[[nodiscard]] inline ShrinkRegions shrink_regions(const SceneAnnotation& ann, const ShrinkParams& params) {
    detail::check_annotation(ann);
    ShrinkRegions out{BitMask(ann.width, ann.height, 0), {}, {}};
    out.parts.resize(ann.texts.size());
    for (std::size_t k = 0; k < ann.texts.size(); ++k) {
        const Polygon& text = ann.texts[k];
        std::vector<Polygon> parts;
        try {
            parts = offset_polygon(text, -shrink_offset(text, params));
        } catch (const EmptyResult&) {
        }
        std::erase_if(parts, [](const Polygon& p) { return area(p) < kMinShrinkPartArea; });
        if (parts.empty()) {
            out.skipped.push_back(k);
            continue;
        }
        for (const auto& p : parts) rasterize_into(out.mask, p);
        out.parts[k] = std::move(parts);
    }
    return out;
}

[[nodiscard]] inline BitMask gen_shrink_mask(const SceneAnnotation& ann, const ShrinkParams& params) {
    return shrink_regions(ann, params).mask;
}

/// Distance from each pixel centre inside a text to that text's contour, minimised over the
/// texts covering the pixel; 0 outside every text.
///
/// Distances are exact point-to-edge distances. A centre lying exactly on an edge still
/// counts as inside, so values are floored at kCoordEpsilon to stay positive on text pixels.
[[nodiscard]] inline FloatMap gen_offset_map(const SceneAnnotation& ann) {
    detail::check_annotation(ann);
    constexpr double none = std::numeric_limits<double>::infinity();
    FloatMap out(ann.width, ann.height, none);
    for (const Polygon& text : ann.texts) {
        const PixelWindow win = footprint(text.bounds(), ann.width, ann.height, 1);
        if (win.empty()) continue;
        BitMask local(win.w, win.h, 0);
        rasterize_into(local, text, win.x0, win.y0);
        const auto v = text.vertices();
        for (int r = 0; r < win.h; ++r) {
            for (int c = 0; c < win.w; ++c) {
                if (!local(r, c)) continue;
                const double px = win.x0 + c + 0.5, py = win.y0 + r + 0.5;
                double d = none;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Point2& a = v[i];
                    const Point2& b = v[(i + 1) % v.size()];
                    d = std::min(d, detail::point_segment_distance(px, py, a.x, a.y, b.x, b.y));
                }
                double& o = out(win.y0 + r, win.x0 + c);
                o = std::min(o, std::max(d, kCoordEpsilon));
            }
        }
    }
    for (auto& v : out.data()) {
        if (v == none) v = 0.0;
    }
    return out;
}

/// Fraction of each pixel's clipped anchor window covered by shrink-mask pixels.
[[nodiscard]] inline FloatMap gen_spw_map(const SceneAnnotation& ann, const BitMask& shrink, int window) {
    detail::check_annotation(ann);
    if (window <= 0) throw InvalidArgument("anchor window must be positive");
    if (!shrink.same_shape(ann.width, ann.height)) throw ShapeMismatch("gen_spw_map: shrink mask does not match annotation size");
    const detail::IntegralImage integral(shrink);
    FloatMap out(ann.width, ann.height, 0.0);
    for (int r = 0; r < ann.height; ++r) {
        const auto [r0, r1] = detail::window_range(r, window, ann.height);
        for (int c = 0; c < ann.width; ++c) {
            const auto [c0, c1] = detail::window_range(c, window, ann.width);
            const double area = static_cast<double>(r1 - r0 + 1) * (c1 - c0 + 1);
            out(r, c) = static_cast<double>(integral.sum(r0, r1, c0, c1)) / area;
        }
    }
    return out;
}

/// Whole-text IoU of each pixel's anchor window against the text it overlaps most.
[[nodiscard]] inline FloatMap gen_iou_map(const SceneAnnotation& ann, int window) {
    detail::check_annotation(ann);
    if (window <= 0) throw InvalidArgument("anchor window must be positive");
    std::vector<detail::IntegralImage> integrals;
    std::vector<double> text_area;
    for (const Polygon& text : ann.texts) {
        const BitMask m = rasterize(text, ann.width, ann.height);
        text_area.push_back(static_cast<double>(popcount(m)));
        integrals.emplace_back(m);
    }
    FloatMap out(ann.width, ann.height, 0.0);
    for (int r = 0; r < ann.height; ++r) {
        const auto [r0, r1] = detail::window_range(r, window, ann.height);
        for (int c = 0; c < ann.width; ++c) {
            const auto [c0, c1] = detail::window_range(c, window, ann.width);
            const double anchor = static_cast<double>(r1 - r0 + 1) * (c1 - c0 + 1);
            std::int64_t best = 0;
            std::size_t best_k = 0;
            for (std::size_t k = 0; k < integrals.size(); ++k) {
                const std::int64_t inter = integrals[k].sum(r0, r1, c0, c1);
                if (inter > best) {
                    best = inter;
                    best_k = k;
                }
            }
            if (best == 0) continue;
            const double inter = static_cast<double>(best);
            out(r, c) = inter / (anchor + text_area[best_k] - inter);
        }
    }
    return out;
}

[[nodiscard]] inline LabelMaps gen_labels(const SceneAnnotation& ann, const ShrinkParams& params,
                                          int window = kDefaultWindow) {
    ShrinkRegions shrink = shrink_regions(ann, params);

    SceneAnnotation kept{ann.width, ann.height, {}, {}};
    std::size_t s = 0;
    for (std::size_t k = 0; k < ann.texts.size(); ++k) {
        if (s < shrink.skipped.size() && shrink.skipped[s] == k) {
            ++s;
            continue;
        }
        kept.texts.push_back(ann.texts[k]);
    }

    LabelMaps maps;
    maps.offset = gen_offset_map(kept);
    maps.spw = gen_spw_map(ann, shrink.mask, window);
    maps.ignore = BitMask(ann.width, ann.height, 0);
    for (const Polygon& p : ann.ignores) rasterize_into(maps.ignore, p);
    maps.shrink = std::move(shrink.mask);
    maps.skipped = std::move(shrink.skipped);
    return maps;
}

}  // namespace shrinkmask
