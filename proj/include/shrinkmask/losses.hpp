#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "shrinkmask/error.hpp"
#include "shrinkmask/labelgen.hpp"
#include "shrinkmask/raster/grid.hpp"

namespace shrinkmask {

struct LossWeights {
    double lambda1 = 1.0;
    double lambda2 = 0.25;
    double lambda3 = 0.25;

    LossWeights() = default;
    LossWeights(double l1, double l2, double l3) : lambda1(l1), lambda2(l2), lambda3(l3) {
        if (!(l1 >= 0 && l2 >= 0 && l3 >= 0)) throw InvalidArgument("loss weights must be non-negative");
    }

    [[nodiscard]] double combine(double l_sm, double l_oa, double l_spw) const {
        return lambda1 * l_sm + lambda2 * l_oa + lambda3 * l_spw;
    }
};

struct OhemConfig {
    double negative_ratio = 3.0;
    std::size_t min_negatives = 256;

    OhemConfig() = default;
    OhemConfig(double ratio, std::size_t min_neg) : negative_ratio(ratio), min_negatives(min_neg) {
        if (!(ratio > 0)) throw InvalidArgument("OHEM negative ratio must be positive");
    }
};

/// Loss value with its gradient with respect to the prediction map.
struct LossGrad {
    double value = 0.0;
    FloatMap grad;
};

struct LossReport {
    double l_sm = 0.0;
    double l_oa = 0.0;
    double l_spw = 0.0;
    double total = 0.0;
    FloatMap grad_sm;
    FloatMap grad_oa;
    FloatMap grad_spw;
};

/// Clamp applied to both operands of the ratio loss.
inline constexpr double kRatioEpsilon = 1e-3;

/// 1 - (2*sum(pred*gt) + 1) / (sum(pred) + sum(gt) + 1) over valid pixels.
[[nodiscard]] inline LossGrad dice_loss(const FloatMap& pred, const BitMask& gt, const BitMask& valid) {
    require_same_shape(pred, gt, "dice_loss");
    require_same_shape(pred, valid, "dice_loss");
    double inter = 0.0, sp = 0.0, sg = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!valid[i]) continue;
        const double g = gt[i] ? 1.0 : 0.0;
        inter += pred[i] * g;
        sp += pred[i];
        sg += g;
    }
    const double num = 2.0 * inter + 1.0;
    const double den = sp + sg + 1.0;
    LossGrad out{1.0 - num / den, FloatMap(pred.width(), pred.height(), 0.0)};
    const double den2 = den * den;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!valid[i]) continue;
        const double g = gt[i] ? 1.0 : 0.0;
        out.grad[i] = -(2.0 * g * den - num) / den2;
    }
    return out;
}

/// All non-ignored positives plus the K hardest non-ignored negatives, where
/// K = clamp(floor(ratio * positives), min_negatives, available negatives).
[[nodiscard]] inline BitMask ohem_select(const FloatMap& pred, const BitMask& gt, const BitMask& ignore,
                                         const OhemConfig& cfg) {
    require_same_shape(pred, gt, "ohem_select");
    require_same_shape(pred, ignore, "ohem_select");
    BitMask valid(pred.width(), pred.height(), 0);
    std::vector<std::size_t> negatives;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (ignore[i]) continue;
        if (gt[i]) {
            valid[i] = 1;
            ++positives;
        } else {
            negatives.push_back(i);
        }
    }
    const auto wanted = static_cast<std::size_t>(std::floor(cfg.negative_ratio * static_cast<double>(positives)));
    const std::size_t k = std::min(negatives.size(), std::max(wanted, cfg.min_negatives));
    auto harder = [&](std::size_t a, std::size_t b) { return pred[a] > pred[b] || (pred[a] == pred[b] && a < b); };
    std::partial_sort(negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(k), negatives.end(), harder);
    for (std::size_t j = 0; j < k; ++j) valid[negatives[j]] = 1;
    return valid;
}

/// log(max(p, p_hat) / min(p, p_hat)) and its derivative in p_hat (0 at equality).
[[nodiscard]] inline std::pair<double, double> ratio_loss(double p, double p_hat) {
    if (!(p > 0) || !(p_hat > 0)) {
        throw NonPositiveInput("ratio_loss needs positive operands, got " + std::to_string(p) + ", " +
                               std::to_string(p_hat));
    }
    const double value = std::log(std::max(p, p_hat) / std::min(p, p_hat));
    double deriv = 0.0;
    if (p_hat > p) deriv = 1.0 / p_hat;
    if (p_hat < p) deriv = -1.0 / p_hat;
    return {value, deriv};
}

namespace detail {

/// Mean clamped ratio loss over `region`; zero with zero gradient when the region is empty.
inline LossGrad region_ratio_loss(const FloatMap& pred, const FloatMap& gt, const BitMask& region, const char* what) {
    require_same_shape(pred, gt, what);
    require_same_shape(pred, region, what);
    LossGrad out{0.0, FloatMap(pred.width(), pred.height(), 0.0)};
    const std::size_t n = popcount(region);
    if (n == 0) return out;
    const double inv = 1.0 / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!region[i]) continue;
        const double p = std::max(gt[i], kRatioEpsilon);
        const bool clamped = pred[i] < kRatioEpsilon;
        const double ph = clamped ? kRatioEpsilon : pred[i];
        const auto [v, d] = ratio_loss(p, ph);
        sum += v;
        out.grad[i] = clamped ? 0.0 : d * inv;
    }
    out.value = sum * inv;
    return out;
}

}  // namespace detail

[[nodiscard]] inline LossGrad offset_loss(const FloatMap& pred, const FloatMap& gt, const BitMask& region) {
    return detail::region_ratio_loss(pred, gt, region, "offset_loss");
}

[[nodiscard]] inline LossGrad spw_loss(const FloatMap& pred, const FloatMap& gt, const BitMask& region) {
    return detail::region_ratio_loss(pred, gt, region, "spw_loss");
}

/// Network outputs for one image.
struct Predictions {
    FloatMap shrink_prob;
    FloatMap offset;
    FloatMap spw;
};

/// Pixels supervised by the offset loss: positive offset target outside DO-NOT-CARE regions.
[[nodiscard]] inline BitMask offset_region(const LabelMaps& labels) {
    BitMask region(labels.offset.width(), labels.offset.height(), 0);
    for (std::size_t i = 0; i < region.size(); ++i) region[i] = labels.offset[i] > 0.0 && !labels.ignore[i];
    return region;
}

/// Weighted sum of the shrink-mask dice loss (on OHEM-selected pixels), the offset ratio
/// loss and the SPW ratio loss. Gradients are reported per term, before weighting.
[[nodiscard]] inline LossReport total_loss(const Predictions& pred, const LabelMaps& labels,
                                           const LossWeights& weights = {}, const OhemConfig& ohem = {},
                                           SpwValidRegion spw_mode = SpwValidRegion::All) {
    const BitMask valid = ohem_select(pred.shrink_prob, labels.shrink, labels.ignore, ohem);
    LossGrad sm = dice_loss(pred.shrink_prob, labels.shrink, valid);
    LossGrad oa = offset_loss(pred.offset, labels.offset, offset_region(labels));
    LossGrad sp = spw_loss(pred.spw, labels.spw, labels.spw_region(spw_mode));
    LossReport r;
    r.l_sm = sm.value;
    r.l_oa = oa.value;
    r.l_spw = sp.value;
    r.total = weights.combine(r.l_sm, r.l_oa, r.l_spw);
    r.grad_sm = std::move(sm.grad);
    r.grad_oa = std::move(oa.grad);
    r.grad_spw = std::move(sp.grad);
    return r;
}

}  // namespace shrinkmask
