#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shrinkmask/geometry.hpp"
#include "shrinkmask/labelgen.hpp"

namespace shrinkmask {

/// xoshiro256** seeded through splitmix64; one independent stream per (seed, stream) pair.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ULL);
        for (auto& word : s_) word = splitmix(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], unbiased by rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(next());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % range);
    }

    /// Standard normal via the Box-Muller transform (cosine branch).
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t splitmix(std::uint64_t& state) {
        state += 0x9E3779B97F4A7C15ULL;
        return mix(state);
    }
    std::array<std::uint64_t, 4> s_{};
};

enum class ShapeFamily { Rectangle, RotatedRect, CurvedBand, Mixed };

[[nodiscard]] inline std::string_view to_string(ShapeFamily f) {
    switch (f) {
        case ShapeFamily::Rectangle: return "rectangle";
        case ShapeFamily::RotatedRect: return "rotated-rect";
        case ShapeFamily::CurvedBand: return "curved-band";
        case ShapeFamily::Mixed: return "mixed";
    }
    return "mixed";
}

[[nodiscard]] inline std::optional<ShapeFamily> parse_shape_family(std::string_view s) {
    if (s == "rectangle") return ShapeFamily::Rectangle;
    if (s == "rotated-rect") return ShapeFamily::RotatedRect;
    if (s == "curved-band") return ShapeFamily::CurvedBand;
    if (s == "mixed") return ShapeFamily::Mixed;
    return std::nullopt;
}

struct SynthConfig {
    std::uint64_t seed = 42;
    int width = 640;
    int height = 640;
    int min_instances = 1;
    int max_instances = 5;
    /// Range of the short side (text height) in px.
    double min_text = 40.0;
    double max_text = 120.0;
    /// Range of length / height.
    double min_aspect = 1.5;
    double max_aspect = 5.0;
    ShapeFamily family = ShapeFamily::Mixed;
    double min_separation = 8.0;
    double ignore_probability = 0.1;
    /// Instances keep at least this distance from the image border.
    double border_margin = 2.0;

    void validate() const {
        if (width <= 0 || height <= 0) throw InvalidArgument("synthetic image size must be positive");
        if (min_instances < 0 || max_instances < min_instances) {
            throw InvalidArgument("instance count range is empty");
        }
        if (!(min_text > 0.0) || max_text < min_text) throw InvalidArgument("text size range is empty");
        if (!(min_aspect >= 1.0) || max_aspect < min_aspect) throw InvalidArgument("aspect range is empty");
        if (!(min_separation >= 0.0)) throw InvalidArgument("separation must be non-negative");
        if (!(ignore_probability >= 0.0 && ignore_probability <= 1.0)) {
            throw InvalidArgument("ignore probability must lie in [0,1]");
        }
        if (!(border_margin >= 0.0)) throw InvalidArgument("border margin must be non-negative");
    }
};

/// Rejection-sampling budget per instance.
inline constexpr int kMaxPlacementAttempts = 1000;
/// Points per side of a curved band.
inline constexpr int kBandSamples = 7;

namespace detail {

struct Frame {
    double cos_t = 1.0, sin_t = 0.0;
    Point2 apply(double x, double y) const { return {x * cos_t - y * sin_t, x * sin_t + y * cos_t}; }
};

/// Shape centred on the origin; placement translates it afterwards.
inline std::vector<Point2> sample_shape(Rng& rng, ShapeFamily family, const SynthConfig& cfg) {
    const double max_len = 0.8 * std::min(cfg.width, cfg.height);
    const double t = std::min(rng.uniform(cfg.min_text, cfg.max_text), max_len);
    const double len = std::clamp(t * rng.uniform(cfg.min_aspect, cfg.max_aspect), t, std::max(t, max_len));
    Frame frame;
    if (family != ShapeFamily::Rectangle) {
        const double angle = rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
        frame = {std::cos(angle), std::sin(angle)};
    }
    std::vector<Point2> pts;
    if (family != ShapeFamily::CurvedBand) {
        const double hx = len / 2, hy = t / 2;
        for (auto [x, y] : {std::pair{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}}) pts.push_back(frame.apply(x, y));
        return pts;
    }
    // Sine-arc centreline; amplitude keeps the radius of curvature at least the band height.
    const double omega = std::numbers::pi * rng.uniform(0.5, 1.5) / len;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double amp = rng.uniform(0.3, 1.0) * std::min(0.3 * len, 1.0 / (omega * omega * t));
    std::array<Point2, kBandSamples> top, bottom;
    for (int i = 0; i < kBandSamples; ++i) {
        const double s = -len / 2 + len * i / (kBandSamples - 1);
        const double y = amp * std::sin(omega * s + phase);
        const double dy = amp * omega * std::cos(omega * s + phase);
        const double n = std::hypot(1.0, dy);
        const double nx = -dy / n, ny = 1.0 / n;
        top[i] = frame.apply(s + nx * t / 2, y + ny * t / 2);
        bottom[i] = frame.apply(s - nx * t / 2, y - ny * t / 2);
    }
    for (int i = 0; i < kBandSamples; ++i) pts.push_back(bottom[i]);
    for (int i = kBandSamples - 1; i >= 0; --i) pts.push_back(top[i]);
    return pts;
}

}  // namespace detail

/// Deterministic scene for (cfg.seed, index) with pairwise-separated text and ignore polygons.
[[nodiscard]] inline SceneAnnotation generate_scene(const SynthConfig& cfg, std::uint64_t index) {
    cfg.validate();
    Rng rng(cfg.seed, index);
    SceneAnnotation ann{cfg.width, cfg.height, {}, {}};
    const auto count = rng.uniform_int(cfg.min_instances, cfg.max_instances);
    std::vector<const Polygon*> placed;
    for (std::int64_t k = 0; k < count; ++k) {
        ShapeFamily family = cfg.family;
        if (family == ShapeFamily::Mixed) family = static_cast<ShapeFamily>(rng.uniform_int(0, 2));
        const bool ignore = rng.uniform() < cfg.ignore_probability;
        std::optional<Polygon> accepted;
        for (int attempt = 0; attempt < kMaxPlacementAttempts && !accepted; ++attempt) {
            std::vector<Point2> pts = detail::sample_shape(rng, family, cfg);
            BoundingBox bb;
            for (const auto& p : pts) bb.extend(p.x, p.y);
            const double lo_x = cfg.border_margin - bb.min_x, hi_x = cfg.width - cfg.border_margin - bb.max_x;
            const double lo_y = cfg.border_margin - bb.min_y, hi_y = cfg.height - cfg.border_margin - bb.max_y;
            if (lo_x > hi_x || lo_y > hi_y) continue;
            const double tx = rng.uniform(lo_x, hi_x), ty = rng.uniform(lo_y, hi_y);
            for (auto& p : pts) p = Point2(p.x + tx, p.y + ty);
            std::optional<Polygon> poly;
            try {
                poly.emplace(std::move(pts));
            } catch (const InvalidArgument&) {
                continue;
            }
            const bool clear = std::none_of(placed.begin(), placed.end(), [&](const Polygon* q) {
                return poly->bounds().overlaps(q->bounds(), cfg.min_separation) && distance(*poly, *q) < cfg.min_separation;
            });
            if (clear) accepted = std::move(poly);
        }
        if (!accepted) {
            throw PlacementFailure("scene " + std::to_string(index) + ": could not place instance " +
                                   std::to_string(k + 1) + " of " + std::to_string(count) + " after " +
                                   std::to_string(kMaxPlacementAttempts) + " attempts");
        }
        auto& dst = ignore ? ann.ignores : ann.texts;
        dst.push_back(std::move(*accepted));
        // Re-collect pointers: push_back may have reallocated either list.
        placed.clear();
        for (const auto& p : ann.texts) placed.push_back(&p);
        for (const auto& p : ann.ignores) placed.push_back(&p);
    }
    return ann;
}

/// Stand-in network outputs: ground-truth shrink mask and offset map plus Gaussian noise.
struct OraclePredictions {
    FloatMap shrink_prob;
    FloatMap offset_pred;
};

[[nodiscard]] inline OraclePredictions oracle_predictions(const LabelMaps& labels, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw InvalidArgument("noise sigma must be non-negative");
    OraclePredictions out{to_float(labels.shrink), labels.offset};
    if (sigma == 0.0) return out;
    Rng rng(seed, 0);
    for (auto& v : out.shrink_prob.data()) v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
    for (auto& v : out.offset_pred.data()) v = std::max(0.0, v + sigma * rng.normal());
    return out;
}

[[nodiscard]] inline OraclePredictions oracle_predictions(const SceneAnnotation& ann, const ShrinkParams& params,
                                                          double sigma, std::uint64_t seed) {
    return oracle_predictions(gen_labels(ann, params, 1), sigma, seed);
}

}  // namespace shrinkmask
