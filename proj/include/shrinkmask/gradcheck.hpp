#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "shrinkmask/losses.hpp"
#include "shrinkmask/synth.hpp"

namespace shrinkmask {

/// Finite-difference step used by the gradient checks.
inline constexpr double kGradStep = 1e-5;
/// Instances keep predictions at least this far from the loss kinks (pred == gt and the clamp).
inline constexpr double kKinkMargin = 1e-3;

struct GradCheckResult {
    std::string loss;
    std::size_t trials = 0;
    double max_rel_error = 0.0;
};

/// Largest |analytic - central difference| / max(|analytic|, |central difference|) over all
/// pixels; pixels where both are exactly zero count as agreeing.
[[nodiscard]] inline double max_relative_error(const FloatMap& x, const FloatMap& analytic,
                                               const std::function<double(const FloatMap&)>& f,
                                               double h = kGradStep) {
    FloatMap probe = x;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        const double fd = (up - down) / (2.0 * h);
        const double scale = std::max(std::abs(fd), std::abs(analytic[i]));
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(fd - analytic[i]) / scale);
    }
    return worst;
}

namespace detail {

inline BitMask random_mask(Rng& rng, int w, int h, double p) {
    BitMask m(w, h, 0);
    for (auto& v : m.data()) v = rng.uniform() < p;
    return m;
}

/// Ratio-loss instance: positive targets (some below the clamp) and predictions kept away
/// from the kinks.
inline std::pair<FloatMap, FloatMap> random_ratio_instance(Rng& rng, int w, int h, double scale) {
    FloatMap gt(w, h, 0.0), pred(w, h, 0.0);
    for (std::size_t i = 0; i < gt.size(); ++i) {
        gt[i] = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.01, 1.0) * scale;
        const double target = std::max(gt[i], kRatioEpsilon);
        double p;
        do {
            p = rng.uniform(0.002, 1.2) * scale;
        } while (std::abs(p - target) < kKinkMargin * scale || std::abs(p - kRatioEpsilon) < kKinkMargin);
        pred[i] = p;
    }
    return {std::move(gt), std::move(pred)};
}

}  // namespace detail

/// Gradient checks of the dice, offset and SPW losses on `trials` random w x h instances each.
[[nodiscard]] inline std::vector<GradCheckResult> run_gradient_checks(std::size_t trials, std::uint64_t seed,
                                                                      int w = 16, int h = 16) {
    std::vector<GradCheckResult> out{{"dice", trials, 0.0}, {"offset", trials, 0.0}, {"spw", trials, 0.0}};
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        {
            const BitMask gt = detail::random_mask(rng, w, h, 0.3);
            const BitMask valid = detail::random_mask(rng, w, h, 0.8);
            FloatMap pred(w, h, 0.0);
            for (auto& v : pred.data()) v = rng.uniform();
            const LossGrad lg = dice_loss(pred, gt, valid);
            const double e = max_relative_error(pred, lg.grad, [&](const FloatMap& p) { return dice_loss(p, gt, valid).value; });
            out[0].max_rel_error = std::max(out[0].max_rel_error, e);
        }
        {
            auto [gt, pred] = detail::random_ratio_instance(rng, w, h, 20.0);
            BitMask region(w, h, 0);
            for (std::size_t i = 0; i < region.size(); ++i) region[i] = gt[i] > 0.0;
            const LossGrad lg = offset_loss(pred, gt, region);
            const double e = max_relative_error(pred, lg.grad, [&](const FloatMap& p) { return offset_loss(p, gt, region).value; });
            out[1].max_rel_error = std::max(out[1].max_rel_error, e);
        }
        {
            auto [gt, pred] = detail::random_ratio_instance(rng, w, h, 1.0);
            const BitMask region = detail::random_mask(rng, w, h, 0.9);
            const LossGrad lg = spw_loss(pred, gt, region);
            const double e = max_relative_error(pred, lg.grad, [&](const FloatMap& p) { return spw_loss(p, gt, region).value; });
            out[2].max_rel_error = std::max(out[2].max_rel_error, e);
        }
    }
    return out;
}

}  // namespace shrinkmask
