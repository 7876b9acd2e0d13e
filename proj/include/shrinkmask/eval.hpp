#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "shrinkmask/detection.hpp"
#include "shrinkmask/geometry.hpp"

namespace shrinkmask {

struct MatchConfig {
    std::vector<double> iou_thresholds{0.5, 0.75};
    /// A detection is dropped when more than this fraction of its area lies in one DO-NOT-CARE region.
    double ignore_overlap = 0.5;

    void validate() const {
        if (iou_thresholds.empty()) throw InvalidArgument("at least one IoU threshold is required");
        for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
            const double t = iou_thresholds[i];
            if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("IoU thresholds must lie in (0,1]");
            if (i > 0 && !(t > iou_thresholds[i - 1])) {
                throw InvalidArgument("IoU thresholds must be strictly increasing");
            }
        }
        if (!(ignore_overlap >= 0.0 && ignore_overlap <= 1.0)) {
            throw InvalidArgument("ignore overlap must lie in [0,1]");
        }
    }
};

struct Match {
    std::size_t det = 0;
    std::size_t gt = 0;
    double iou = 0.0;

    bool operator==(const Match&) const = default;
};

struct ThresholdMetrics {
    double threshold = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f_measure = 0.0;
    std::vector<Match> matches;
};

struct EvalReport {
    std::vector<ThresholdMetrics> per_threshold;
    /// Detections removed for lying in DO-NOT-CARE regions.
    std::size_t ignored_dets = 0;
};

namespace detail {

/// Precision, recall and F from counts. With no detections precision is 1 only when there
/// is nothing to find; with no ground truth recall is 1.
inline void finish_metrics(ThresholdMetrics& m) {
    const std::size_t dets = m.tp + m.fp, gts = m.tp + m.fn;
    m.precision = dets > 0 ? static_cast<double>(m.tp) / static_cast<double>(dets) : (gts == 0 ? 1.0 : 0.0);
    m.recall = gts > 0 ? static_cast<double>(m.tp) / static_cast<double>(gts) : 1.0;
    const double s = m.precision + m.recall;
    m.f_measure = s > 0.0 ? 2.0 * m.precision * m.recall / s : 0.0;
}

}  // namespace detail

/// Greedy one-to-one matching by descending IoU after discarding detections inside
/// DO-NOT-CARE regions. Match indices refer to the input lists.
[[nodiscard]] inline EvalReport match_polygons(std::span<const Polygon> dets, std::span<const Polygon> gts,
                                               std::span<const Polygon> ignores, const MatchConfig& cfg = {}) {
    cfg.validate();
    EvalReport report;
    std::vector<std::size_t> kept;
    for (std::size_t d = 0; d < dets.size(); ++d) {
        const double limit = cfg.ignore_overlap * area(dets[d]);
        const bool ignored = std::any_of(ignores.begin(), ignores.end(), [&](const Polygon& ig) {
            return intersection_area(dets[d], ig) > limit;
        });
        if (ignored) {
            ++report.ignored_dets;
        } else {
            kept.push_back(d);
        }
    }

    std::vector<Match> candidates;
    for (std::size_t d : kept) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!dets[d].bounds().overlaps(gts[g].bounds())) continue;
            const double iou = polygon_iou(dets[d], gts[g]);
            if (iou > 0.0) candidates.push_back({d, g, iou});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Match& a, const Match& b) {
        return std::tie(b.iou, a.det, a.gt) < std::tie(a.iou, b.det, b.gt);
    });
    std::vector<bool> det_used(dets.size(), false), gt_used(gts.size(), false);
    std::vector<Match> greedy;
    for (const Match& m : candidates) {
        if (det_used[m.det] || gt_used[m.gt]) continue;
        det_used[m.det] = gt_used[m.gt] = true;
        greedy.push_back(m);
    }

    for (double t : cfg.iou_thresholds) {
        ThresholdMetrics m;
        m.threshold = t;
        for (const Match& g : greedy) {
            if (g.iou >= t) m.matches.push_back(g);
        }
        m.tp = m.matches.size();
        m.fp = kept.size() - m.tp;
        m.fn = gts.size() - m.tp;
        detail::finish_metrics(m);
        report.per_threshold.push_back(std::move(m));
    }
    return report;
}

[[nodiscard]] inline EvalReport match_detections(std::span<const Detection> dets, std::span<const Polygon> gts,
                                                 std::span<const Polygon> ignores, const MatchConfig& cfg = {}) {
    std::vector<Polygon> contours;
    contours.reserve(dets.size());
    for (const auto& d : dets) contours.push_back(d.contour);
    return match_polygons(contours, gts, ignores, cfg);
}

/// Dataset-level metrics from summed counts. Match lists are concatenated; their indices
/// stay local to each source report.
[[nodiscard]] inline EvalReport aggregate(std::span<const EvalReport> reports) {
    if (reports.empty()) throw InvalidArgument("aggregate needs at least one report");
    EvalReport out;
    for (const auto& m : reports.front().per_threshold) {
        ThresholdMetrics t;
        t.threshold = m.threshold;
        out.per_threshold.push_back(std::move(t));
    }
    for (const auto& r : reports) {
        if (r.per_threshold.size() != out.per_threshold.size()) {
            throw ThresholdMismatch("reports use different IoU threshold lists");
        }
        out.ignored_dets += r.ignored_dets;
        for (std::size_t i = 0; i < r.per_threshold.size(); ++i) {
            const auto& src = r.per_threshold[i];
            auto& dst = out.per_threshold[i];
            if (src.threshold != dst.threshold) throw ThresholdMismatch("reports use different IoU thresholds");
            dst.tp += src.tp;
            dst.fp += src.fp;
            dst.fn += src.fn;
            dst.matches.insert(dst.matches.end(), src.matches.begin(), src.matches.end());
        }
    }
    for (auto& t : out.per_threshold) detail::finish_metrics(t);
    return out;
}

}  // namespace shrinkmask
