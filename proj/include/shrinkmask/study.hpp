#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shrinkmask/labelgen.hpp"
#include "shrinkmask/parallel.hpp"
#include "shrinkmask/postproc.hpp"

namespace shrinkmask {

/// How the fixed-mode coefficient is matched to the adaptive offsets on unperturbed masks.
enum class Calibration {
    /// One coefficient per text, so both modes coincide at k = 0 and the study isolates the
    /// effect of the perturbation.
    PerInstance,
    /// One least-squares coefficient for the whole scene set.
    Global,
};

[[nodiscard]] inline std::string_view to_string(Calibration c) {
    return c == Calibration::PerInstance ? "per-instance" : "global";
}

[[nodiscard]] inline std::optional<Calibration> parse_calibration(std::string_view s) {
    if (s == "per-instance") return Calibration::PerInstance;
    if (s == "global") return Calibration::Global;
    return std::nullopt;
}

struct StudyConfig {
    std::vector<int> k_values{-3, -2, -1, 0, 1, 2, 3};
    ShrinkParams shrink{0.4};
    /// Shared post-processing settings; the extension mode is set per leg.
    PostprocConfig postproc;
    Calibration calibration = Calibration::PerInstance;
    /// Fixed-mode coefficient for every text; overrides calibration when present.
    std::optional<double> delta_t;
    unsigned threads = 1;
};

struct StudyRow {
    int k = 0;
    double mean_iou_adaptive = 0.0;
    double mean_iou_fixed = 0.0;
};

struct StudyReport {
    /// The shared coefficient, or the mean per-text coefficient under per-instance calibration.
    double delta_t = 0.0;
    std::size_t texts = 0;
    std::vector<StudyRow> rows;
};

/// Best IoU of `gt` against any detection; 0 when nothing overlaps.
[[nodiscard]] inline double best_iou(const Polygon& gt, std::span<const Detection> dets) {
    double best = 0.0;
    for (const auto& d : dets) {
        if (d.contour.bounds().overlaps(gt.bounds())) best = std::max(best, polygon_iou(d.contour, gt));
    }
    return best;
}

/// Least-squares delta_t making area/perimeter * delta_t match the adaptive offsets of the
/// given detections.
[[nodiscard]] inline double calibrate_delta_t(std::span<const std::vector<Detection>> per_scene) {
    double num = 0.0, den = 0.0;
    for (const auto& dets : per_scene) {
        for (const auto& d : dets) {
            const double r = area(d.shrink_contour) / perimeter(d.shrink_contour);
            num += d.offset_used * r;
            den += r * r;
        }
    }
    if (!(den > 0.0) || !(num > 0.0)) throw InvalidArgument("calibration needs at least one detection");
    return num / den;
}

/// Perturbs ground-truth shrink masks by each k and rebuilds contours with the adaptive
/// offsets (taken from the unperturbed labels) and with the fixed offset (recomputed from
/// the perturbed mask), reporting the mean best-match IoU against the ground-truth texts.
[[nodiscard]] inline StudyReport run_perturbation_study(std::span<const SceneAnnotation> scenes,
                                                        const StudyConfig& cfg) {
    if (scenes.empty()) throw InvalidArgument("perturbation study needs at least one scene");
    PostprocConfig adaptive = cfg.postproc;
    adaptive.extend_mode = ExtendMode::Adaptive;
    adaptive.validate();

    std::vector<LabelMaps> labels(scenes.size());
    parallel_for(scenes.size(), cfg.threads, [&](std::size_t i) { labels[i] = gen_labels(scenes[i], cfg.shrink, 1); });

    StudyReport report;
    for (const auto& s : scenes) report.texts += s.texts.size();

    // Per-instance coefficients are painted over each unperturbed shrink region so that
    // perturbed components pick up the coefficient of the text they came from.
    std::vector<FloatMap> delta_maps;
    if (cfg.delta_t) {
        report.delta_t = *cfg.delta_t;
    } else {
        std::vector<std::vector<Detection>> base(scenes.size());
        parallel_for(scenes.size(), cfg.threads, [&](std::size_t i) {
            base[i] = reconstruct(to_float(labels[i].shrink), labels[i].offset, adaptive).detections;
        });
        report.delta_t = calibrate_delta_t(base);
        if (cfg.calibration == Calibration::PerInstance) {
            delta_maps.resize(scenes.size());
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < scenes.size(); ++i) {
                delta_maps[i] = FloatMap(scenes[i].width, scenes[i].height, 0.0);
                for (const auto& d : base[i]) {
                    const double delta = d.offset_used * perimeter(d.shrink_contour) / area(d.shrink_contour);
                    if (!(delta > 0.0)) continue;
                    const BitMask region = rasterize(d.shrink_contour, scenes[i].width, scenes[i].height);
                    for (std::size_t p = 0; p < region.size(); ++p) {
                        if (region[p]) delta_maps[i][p] = delta;
                    }
                    sum += delta;
                    ++n;
                }
            }
            report.delta_t = sum / static_cast<double>(n);
        }
    }
    PostprocConfig fixed = cfg.postproc;
    fixed.extend_mode = ExtendMode::Fixed;
    fixed.delta_t = report.delta_t;
    fixed.validate();

    for (int k : cfg.k_values) {
        std::vector<double> sum_a(scenes.size(), 0.0), sum_f(scenes.size(), 0.0);
        parallel_for(scenes.size(), cfg.threads, [&](std::size_t i) {
            const FloatMap prob = to_float(perturb_mask(labels[i].shrink, k));
            const auto det_a = reconstruct(prob, labels[i].offset, adaptive).detections;
            const auto det_f =
                reconstruct(prob, labels[i].offset, fixed, delta_maps.empty() ? nullptr : &delta_maps[i]).detections;
            for (const auto& gt : scenes[i].texts) {
                sum_a[i] += best_iou(gt, det_a);
                sum_f[i] += best_iou(gt, det_f);
            }
        });
        StudyRow row{k, 0.0, 0.0};
        for (std::size_t i = 0; i < scenes.size(); ++i) {
            row.mean_iou_adaptive += sum_a[i];
            row.mean_iou_fixed += sum_f[i];
        }
        if (report.texts > 0) {
            row.mean_iou_adaptive /= static_cast<double>(report.texts);
            row.mean_iou_fixed /= static_cast<double>(report.texts);
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace shrinkmask
