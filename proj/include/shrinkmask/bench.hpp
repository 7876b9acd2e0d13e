#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "shrinkmask/postproc.hpp"
#include "shrinkmask/synth.hpp"

namespace shrinkmask {

struct LatencyStats {
    std::size_t samples = 0;
    double mean = 0.0;
    double p50 = 0.0;
    double p99 = 0.0;
};

/// Mean and nearest-rank percentiles.
[[nodiscard]] inline LatencyStats summarize(std::vector<double> ms) {
    LatencyStats s;
    s.samples = ms.size();
    if (ms.empty()) return s;
    std::sort(ms.begin(), ms.end());
    s.mean = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
    auto rank = [&](double q) {
        const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(ms.size())));
        return ms[std::clamp<std::size_t>(k, 1, ms.size()) - 1];
    };
    s.p50 = rank(0.50);
    s.p99 = rank(0.99);
    return s;
}

struct BenchConfig {
    SynthConfig synth;
    std::size_t scenes = 10;
    std::size_t repeat = 10;
    double sigma = 0.0;
    PostprocConfig postproc;
};

struct BenchReport {
    LatencyStats total, binarize, components, trace, extend;
    std::size_t detections = 0;
};

/// Post-processing latency on oracle predictions of synthetic scenes; label generation is
/// done up front and not timed.
[[nodiscard]] inline BenchReport run_bench(const BenchConfig& cfg) {
    std::vector<OraclePredictions> inputs;
    inputs.reserve(cfg.scenes);
    for (std::size_t i = 0; i < cfg.scenes; ++i) {
        const SceneAnnotation ann = generate_scene(cfg.synth, i);
        inputs.push_back(oracle_predictions(gen_labels(ann, ShrinkParams(0.4), 1), cfg.sigma, cfg.synth.seed + i));
    }
    std::vector<double> total, bin, comp, trace, ext;
    BenchReport report;
    for (std::size_t r = 0; r < cfg.repeat; ++r) {
        for (const auto& in : inputs) {
            const ReconstructResult res = reconstruct(in.shrink_prob, in.offset_pred, cfg.postproc);
            total.push_back(res.timing.total_ms);
            bin.push_back(res.timing.binarize_ms);
            comp.push_back(res.timing.components_ms);
            trace.push_back(res.timing.trace_ms);
            ext.push_back(res.timing.extend_ms);
            if (r == 0) report.detections += res.detections.size();
        }
    }
    report.total = summarize(std::move(total));
    report.binarize = summarize(std::move(bin));
    report.components = summarize(std::move(comp));
    report.trace = summarize(std::move(trace));
    report.extend = summarize(std::move(ext));
    return report;
}

}  // namespace shrinkmask
