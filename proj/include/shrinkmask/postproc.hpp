#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shrinkmask/detection.hpp"
#include "shrinkmask/geometry.hpp"
#include "shrinkmask/raster.hpp"

namespace shrinkmask {

enum class OffsetAggregation { ContourBandMean, RegionMean };

[[nodiscard]] inline std::string_view to_string(OffsetAggregation a) {
    return a == OffsetAggregation::ContourBandMean ? "contour-band-mean" : "region-mean";
}

struct PostprocConfig {
    double binarize_threshold = 0.3;
    double min_area = 16.0;
    double min_score = 0.5;
    ExtendMode extend_mode = ExtendMode::Adaptive;
    double delta_t = 1.5;
    OffsetAggregation offset_aggregation = OffsetAggregation::ContourBandMean;
    /// Pixels of a component within this distance of its contour form the offset band.
    double band_width = 2.0;
    /// Douglas-Peucker tolerance applied to traced contours before extension; 0 keeps the
    /// raw pixel-crack staircase.
    double simplify_tolerance = 1.0;

    void validate() const {
        if (!(binarize_threshold > 0.0 && binarize_threshold < 1.0)) {
            throw InvalidArgument("binarize threshold must lie in (0,1)");
        }
        if (!(min_area >= 0.0)) throw InvalidArgument("min_area must be non-negative");
        if (!(min_score >= 0.0 && min_score <= 1.0)) throw InvalidArgument("min_score must lie in [0,1]");
        if (extend_mode == ExtendMode::Fixed && !(delta_t > 0.0)) {
            throw InvalidArgument("fixed extension needs delta_t > 0");
        }
        if (!(band_width > 0.0)) throw InvalidArgument("band width must be positive");
        if (!(simplify_tolerance >= 0.0)) throw InvalidArgument("simplify tolerance must be non-negative");
    }
};

struct TimingBreakdown {
    double binarize_ms = 0.0;
    double components_ms = 0.0;
    double trace_ms = 0.0;
    double extend_ms = 0.0;
    double total_ms = 0.0;
};

struct ReconstructResult {
    std::vector<Detection> detections;
    TimingBreakdown timing;
    std::vector<std::string> diagnostics;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct ComponentStats {
    std::size_t pixels = 0;
    double prob_sum = 0.0;
    double offset_sum = 0.0;
    double delta_sum = 0.0;
    std::size_t delta_pixels = 0;
    int r0 = std::numeric_limits<int>::max(), r1 = -1;
    int c0 = std::numeric_limits<int>::max(), c1 = -1;
};

/// Offset at the contour estimated from the pixels of component `id` lying within `band` px
/// of its boundary: each pixel's value is transported to the boundary by subtracting its own
/// depth below it (distance to the nearest outside pixel centre minus half a pixel).
inline double band_mean(const ComponentLabels& cl, std::uint32_t id, const ComponentStats& st,
                        const FloatMap& offset, double band) {
    const int x0 = std::max(0, st.c0 - 1), y0 = std::max(0, st.r0 - 1);
    const int x1 = std::min(cl.width() - 1, st.c1 + 1), y1 = std::min(cl.height() - 1, st.r1 + 1);
    BitMask local(x1 - x0 + 1, y1 - y0 + 1, 0);
    for (int r = y0; r <= y1; ++r) {
        for (int c = x0; c <= x1; ++c) local(r - y0, c - x0) = cl.labels(r, c) == id;
    }
    const FloatMap dt = distance_transform(local);
    double sum = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < local.height(); ++r) {
        for (int c = 0; c < local.width(); ++c) {
            if (!local(r, c) || dt(r, c) > band) continue;
            sum += offset(y0 + r, x0 + c) - (dt(r, c) - 0.5);
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : st.offset_sum / static_cast<double>(st.pixels);
}

inline void douglas_peucker(std::span<const Point2> pts, std::size_t lo, std::size_t hi, double tol,
                            std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    const Point2& a = pts[lo];
    const Point2& b = pts[hi % pts.size()];
    double worst = -1.0;
    std::size_t at = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double d = point_segment_distance(pts[i].x, pts[i].y, a.x, a.y, b.x, b.y);
        if (d > worst) {
            worst = d;
            at = i;
        }
    }
    if (worst <= tol) return;
    keep[at] = true;
    douglas_peucker(pts, lo, at, tol, keep);
    douglas_peucker(pts, at, hi, tol, keep);
}

/// Closed-ring Douglas-Peucker anchored at vertex 0 and the vertex farthest from it. Returns
/// the input when the simplified ring would be degenerate or self-intersecting.
inline Polygon simplify_ring(const Polygon& poly, double tol) {
    const auto pts = poly.vertices();
    const std::size_t n = pts.size();
    if (tol <= 0.0 || n <= 4) return poly;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = std::hypot(pts[i].x - pts[0].x, pts[i].y - pts[0].y);
        if (d > far_d) {
            far_d = d;
            far = i;
        }
    }
    std::vector<bool> keep(n, false);
    keep[0] = keep[far] = true;
    douglas_peucker(pts, 0, far, tol, keep);
    douglas_peucker(pts, far, n, tol, keep);
    std::vector<Point2> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) out.push_back(pts[i]);
    }
    if (out.size() < 3) return poly;
    try {
        return Polygon(std::move(out));
    } catch (const InvalidArgument&) {
        return poly;
    }
}

}  // namespace detail

/// Rebuilds text contours from a shrink probability map: binarize, split into 8-connected
/// components, trace each outline and push it outward by the adaptive or fixed offset.
/// Detections come back sorted by descending score.
///
/// In fixed mode an optional `delta_t_map` supplies per-component coefficients: a component
/// uses the mean of the map's positive values over its pixels, or `cfg.delta_t` if it has none.
[[nodiscard]] inline ReconstructResult reconstruct(const FloatMap& shrink_prob, const FloatMap& offset_pred,
                                                   const PostprocConfig& cfg,
                                                   const FloatMap* delta_t_map = nullptr) {
    require_same_shape(shrink_prob, offset_pred, "reconstruct");
    if (delta_t_map) require_same_shape(shrink_prob, *delta_t_map, "reconstruct");
    cfg.validate();
    using detail::Clock;
    const auto t_start = Clock::now();
    ReconstructResult out;
    const int w = shrink_prob.width(), h = shrink_prob.height();

    auto t0 = Clock::now();
    BitMask binary(w, h, 0);
    for (std::size_t i = 0; i < binary.size(); ++i) binary[i] = shrink_prob[i] >= cfg.binarize_threshold;
    out.timing.binarize_ms = detail::ms_since(t0);

    t0 = Clock::now();
    const ComponentLabels cl = connected_components(binary, Connectivity::Eight);
    std::vector<detail::ComponentStats> stats(cl.count + 1);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::uint32_t id = cl.labels(r, c);
            if (id == 0) continue;
            auto& s = stats[id];
            ++s.pixels;
            s.prob_sum += shrink_prob(r, c);
            s.offset_sum += offset_pred(r, c);
            if (delta_t_map && (*delta_t_map)(r, c) > 0.0) {
                s.delta_sum += (*delta_t_map)(r, c);
                ++s.delta_pixels;
            }
            s.r0 = std::min(s.r0, r);
            s.r1 = std::max(s.r1, r);
            s.c0 = std::min(s.c0, c);
            s.c1 = std::max(s.c1, c);
        }
    }
    out.timing.components_ms = detail::ms_since(t0);

    struct Pending {
        Detection det;
        std::uint32_t id;
    };
    std::vector<Pending> kept;
    for (std::uint32_t id = 1; id <= cl.count; ++id) {
        const auto& st = stats[id];
        if (static_cast<double>(st.pixels) < cfg.min_area) continue;
        const double score = st.prob_sum / static_cast<double>(st.pixels);
        if (score < cfg.min_score) continue;

        t0 = Clock::now();
        Polygon shrink_contour = detail::simplify_ring(trace_contour(cl, id), cfg.simplify_tolerance);
        out.timing.trace_ms += detail::ms_since(t0);

        t0 = Clock::now();
        double offset = 0.0;
        if (cfg.extend_mode == ExtendMode::Fixed) {
            const double delta_t =
                st.delta_pixels ? st.delta_sum / static_cast<double>(st.delta_pixels) : cfg.delta_t;
            offset = fixed_offset(shrink_contour, FixedExtendParams(delta_t));
        } else if (cfg.offset_aggregation == OffsetAggregation::RegionMean) {
            offset = st.offset_sum / static_cast<double>(st.pixels);
        } else {
            offset = detail::band_mean(cl, id, st, offset_pred, cfg.band_width);
        }
        try {
            std::vector<Polygon> grown = offset > kCoordEpsilon ? offset_polygon(shrink_contour, offset)
                                                                : std::vector<Polygon>{shrink_contour};
            std::vector<Polygon> clipped = clip_to_rect(grown.front(), w, h);
            if (clipped.empty()) throw EmptyResult("expanded contour lies outside the image");
            kept.push_back({Detection{std::move(clipped.front()), score, std::move(shrink_contour), offset,
                                      cfg.extend_mode},
                            id});
        } catch (const Error& e) {
            out.diagnostics.push_back("component " + std::to_string(id) + " dropped: " + e.what());
        }
        out.timing.extend_ms += detail::ms_since(t0);
    }

    std::stable_sort(kept.begin(), kept.end(),
                     [](const Pending& a, const Pending& b) { return a.det.score > b.det.score; });
    out.detections.reserve(kept.size());
    for (auto& p : kept) out.detections.push_back(std::move(p.det));
    out.timing.total_ms = detail::ms_since(t_start);
    return out;
}

/// Dilates (k > 0) or erodes (k < 0) `mask` with a Euclidean disc of radius |k|.
[[nodiscard]] inline BitMask perturb_mask(const BitMask& mask, int k) {
    if (k < -10 || k > 10) throw InvalidArgument("perturbation radius must lie in [-10, 10]");
    if (k == 0) return mask;
    BitMask out(mask.width(), mask.height(), 0);
    if (k > 0) {
        const FloatMap d = distance_to_set(mask);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = d[i] <= k;
        return out;
    }
    BitMask inverse(mask.width(), mask.height(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) inverse[i] = !mask[i];
    const FloatMap d = distance_to_set(inverse);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask[i] && d[i] > -k;
    return out;
}

}  // namespace shrinkmask
