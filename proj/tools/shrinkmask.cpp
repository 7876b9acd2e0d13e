// Command-line front end: label generation, reconstruction, evaluation, studies and tooling.
// Exit codes: 0 success, 1 runtime data error, 2 usage error.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shrinkmask/shrinkmask.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace shrinkmask;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

/// Raised for argument combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    int threads = 0;
    bool json = false;
};

std::vector<fs::path> list_files(const fs::path& dir, std::string_view ext) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void make_parent(const fs::path& file) {
    if (const auto dir = file.parent_path(); !dir.empty()) fs::create_directories(dir);
}

std::pair<int, int> parse_size(const std::string& s) {
    const auto x = s.find('x');
    const auto w = x == std::string::npos ? std::nullopt : io::parse_int<int>(std::string_view(s).substr(0, x));
    const auto h = x == std::string::npos ? std::nullopt : io::parse_int<int>(std::string_view(s).substr(x + 1));
    if (!w || !h || *w <= 0 || *h <= 0) throw UsageError("size must look like WxH, got '" + s + "'");
    return {*w, *h};
}

/// "a..b" (inclusive, step 1) or a comma-separated list.
std::vector<int> parse_k_values(const std::string& s) {
    std::vector<int> out;
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        const auto lo = io::parse_int<int>(std::string_view(s).substr(0, dots));
        const auto hi = io::parse_int<int>(std::string_view(s).substr(dots + 2));
        if (!lo || !hi || *lo > *hi) throw UsageError("bad k range '" + s + "'");
        for (int k = *lo; k <= *hi; ++k) out.push_back(k);
    } else {
        for (auto tok : io::split(s, ',')) {
            const auto k = io::parse_int<int>(tok);
            if (!k) throw UsageError("bad k value '" + std::string(tok) + "'");
            out.push_back(*k);
        }
    }
    for (int k : out) {
        if (k < -10 || k > 10) throw UsageError("k values must lie in [-10, 10]");
    }
    return out;
}

std::vector<double> parse_thresholds(const std::string& s) {
    std::vector<double> out;
    for (auto tok : io::split(s, ',')) {
        const auto v = io::parse_real(tok);
        if (!v) throw UsageError("bad IoU threshold '" + std::string(tok) + "'");
        out.push_back(*v);
    }
    return out;
}

std::string pct(double v) { return io::format_fixed(100.0 * v, 1); }

ordered_json latency_json(const LatencyStats& s) {
    return {{"samples", s.samples}, {"mean_ms", s.mean}, {"p50_ms", s.p50}, {"p99_ms", s.p99}};
}

ordered_json timing_json(const TimingBreakdown& t) {
    return {{"binarize_ms", t.binarize_ms}, {"components_ms", t.components_ms}, {"trace_ms", t.trace_ms},
            {"extend_ms", t.extend_ms},     {"total_ms", t.total_ms}};
}

/// Post-processing flags shared by reconstruct, study and bench.
struct PostprocFlags {
    double threshold = 0.3;
    double min_area = 16.0;
    double min_score = 0.5;
    std::string aggregation = "contour-band-mean";
    double band = 2.0;
    double simplify = 1.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--threshold", threshold, "Binarization threshold on the shrink probability")
            ->capture_default_str();
        cmd->add_option("--min-area", min_area, "Minimum component area in px^2")->capture_default_str();
        cmd->add_option("--min-score", min_score, "Minimum mean shrink probability")->capture_default_str();
        cmd->add_option("--aggregation", aggregation, "Adaptive offset aggregation")
            ->check(CLI::IsMember({"contour-band-mean", "region-mean"}))
            ->capture_default_str();
        cmd->add_option("--band", band, "Contour band width in px")->capture_default_str();
        cmd->add_option("--simplify", simplify, "Contour simplification tolerance in px (0 = off)")
            ->capture_default_str();
    }

    PostprocConfig config() const {
        PostprocConfig cfg;
        cfg.binarize_threshold = threshold;
        cfg.min_area = min_area;
        cfg.min_score = min_score;
        cfg.offset_aggregation =
            aggregation == "region-mean" ? OffsetAggregation::RegionMean : OffsetAggregation::ContourBandMean;
        cfg.band_width = band;
        cfg.simplify_tolerance = simplify;
        return cfg;
    }
};

// ---------------------------------------------------------------------------------------------
// gen-labels

struct GenLabelsArgs {
    std::string ann_dir, out_dir;
    double delta_s = 0.4;
    int window = kDefaultWindow;
    std::string spw_region = "all";
};

int cmd_gen_labels(const GenLabelsArgs& a, const Globals& g) {
    const auto files = list_files(a.ann_dir, ".txt");
    if (files.empty()) {
        std::cerr << "warning: no annotation files (*.txt) in " << a.ann_dir << '\n';
        if (g.json) std::cout << ordered_json{{"command", "gen-labels"}, {"files", 0}, {"failed", 0}}.dump(2) << '\n';
        return kExitOk;
    }
    fs::create_directories(a.out_dir);
    const ShrinkParams params(a.delta_s);
    const SpwValidRegion region = a.spw_region == "shrink-only" ? SpwValidRegion::ShrinkOnly : SpwValidRegion::All;
    std::vector<std::string> errors(files.size()), warnings(files.size());
    parallel_for(files.size(), resolve_threads(g.threads), [&](std::size_t i) {
        try {
            const SceneAnnotation ann = io::read_annotation(files[i]);
            const LabelMaps maps = gen_labels(ann, params, a.window);
            const fs::path base = fs::path(a.out_dir) / files[i].stem();
            io::write_map(base.string() + ".shrink.map", maps.shrink);
            io::write_map(base.string() + ".offset.map", maps.offset);
            io::write_map(base.string() + ".spw.map", maps.spw);
            io::write_map(base.string() + ".ignore.map", maps.ignore);
            io::write_map(base.string() + ".spw_region.map", maps.spw_region(region));
            for (std::size_t k : maps.skipped) {
                warnings[i] += "warning: " + files[i].string() + ": text " + std::to_string(k + 1) +
                               " collapses under shrinking and was skipped\n";
            }
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    std::size_t failed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::cerr << warnings[i];
        if (!errors[i].empty()) {
            std::cerr << "error: " << errors[i] << '\n';
            ++failed;
        }
    }
    if (g.json) {
        std::cout << ordered_json{{"command", "gen-labels"}, {"files", files.size()}, {"failed", failed}}.dump(2)
                  << '\n';
    } else {
        std::cout << "labelled " << files.size() - failed << " of " << files.size() << " annotation files\n";
    }
    return failed ? kExitData : kExitOk;
}

// ---------------------------------------------------------------------------------------------
// reconstruct

struct ReconstructArgs {
    std::string shrink, offset, out, mode = "adaptive";
    std::optional<double> delta_t;
    bool timing_in_file = false;
    PostprocFlags flags;
};

int cmd_reconstruct(const ReconstructArgs& a, const Globals& g) {
    PostprocConfig cfg = a.flags.config();
    cfg.extend_mode = *parse_extend_mode(a.mode);
    if (cfg.extend_mode == ExtendMode::Fixed) {
        if (!a.delta_t) throw UsageError("--mode fixed requires --delta-t");
        cfg.delta_t = *a.delta_t;
    } else if (a.delta_t) {
        cfg.delta_t = *a.delta_t;
    }
    cfg.validate();
    const FloatMap shrink = io::read_float_map(a.shrink);
    const FloatMap offset = io::read_float_map(a.offset);
    if (!shrink.same_shape(offset)) {
        throw UsageError("shape mismatch: shrink map is " + std::to_string(shrink.width()) + "x" +
                         std::to_string(shrink.height()) + ", offset map is " + std::to_string(offset.width()) +
                         "x" + std::to_string(offset.height()));
    }
    const ReconstructResult res = reconstruct(shrink, offset, cfg);
    for (const auto& d : res.diagnostics) std::cerr << "warning: " << d << '\n';
    io::DetectionFile file{res.detections, cfg, std::nullopt};
    if (a.timing_in_file) file.timing = res.timing;
    make_parent(a.out);
    io::write_detections(fs::path(a.out), file);
    if (g.json) {
        std::cout << ordered_json{{"command", "reconstruct"},
                                  {"detections", res.detections.size()},
                                  {"timing", timing_json(res.timing)}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "detections " << res.detections.size() << '\n'
                  << "timing " << io::format_timing(res.timing) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string det_dir, gt_dir, iou = "0.5,0.75";
    double ignore_overlap = 0.5;
};

int cmd_evaluate(const EvaluateArgs& a, const Globals& g) {
    MatchConfig cfg;
    cfg.iou_thresholds = parse_thresholds(a.iou);
    cfg.ignore_overlap = a.ignore_overlap;
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    std::map<std::string, fs::path> dets, gts;
    for (const auto& p : list_files(a.det_dir, ".det")) dets[p.stem().string()] = p;
    for (const auto& p : list_files(a.gt_dir, ".txt")) gts[p.stem().string()] = p;
    std::vector<std::string> unpaired;
    std::vector<std::pair<fs::path, fs::path>> pairs;
    for (const auto& [stem, path] : gts) {
        const auto it = dets.find(stem);
        if (it == dets.end()) {
            unpaired.push_back("ground truth without detections: " + path.string());
        } else {
            pairs.emplace_back(it->second, path);
        }
    }
    for (const auto& [stem, path] : dets) {
        if (!gts.count(stem)) unpaired.push_back("detections without ground truth: " + path.string());
    }
    std::vector<EvalReport> reports(pairs.size());
    parallel_for(pairs.size(), resolve_threads(g.threads), [&](std::size_t i) {
        const io::DetectionFile det = io::read_detections(pairs[i].first);
        const SceneAnnotation ann = io::read_annotation(pairs[i].second);
        reports[i] = match_detections(det.detections, ann.texts, ann.ignores, cfg);
    });
    for (const auto& u : unpaired) std::cerr << "error: " << u << '\n';
    if (pairs.empty()) {
        std::cerr << "error: no paired files to evaluate\n";
        return kExitData;
    }
    const EvalReport total = aggregate(reports);
    if (g.json) {
        ordered_json j{{"command", "evaluate"}, {"images", pairs.size()}, {"unpaired", unpaired.size()}};
        j["ignored_detections"] = total.ignored_dets;
        for (const auto& m : total.per_threshold) {
            j["thresholds"].push_back({{"iou", m.threshold},
                                       {"tp", m.tp},
                                       {"fp", m.fp},
                                       {"fn", m.fn},
                                       {"precision", m.precision},
                                       {"recall", m.recall},
                                       {"f_measure", m.f_measure}});
        }
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& m : total.per_threshold) {
            std::cout << "IoU " << io::format_fixed(m.threshold, 2) << ": P " << pct(m.precision) << " R "
                      << pct(m.recall) << " F " << pct(m.f_measure) << '\n';
        }
    }
    return unpaired.empty() ? kExitOk : kExitData;
}

// ---------------------------------------------------------------------------------------------
// study

struct StudyArgs {
    std::size_t scenes = 200;
    std::uint64_t seed = 42;
    std::string k = "-3..3";
    std::string size = "640x640";
    std::string family = "mixed";
    std::string calibration = "per-instance";
    std::optional<double> delta_t;
    double delta_s = 0.4;
    PostprocFlags flags;
};

int cmd_study(const StudyArgs& a, const Globals& g) {
    SynthConfig sc;
    sc.seed = a.seed;
    std::tie(sc.width, sc.height) = parse_size(a.size);
    sc.family = *parse_shape_family(a.family);
    StudyConfig cfg;
    cfg.k_values = parse_k_values(a.k);
    cfg.shrink = ShrinkParams(a.delta_s);
    cfg.postproc = a.flags.config();
    cfg.calibration = *parse_calibration(a.calibration);
    cfg.delta_t = a.delta_t;
    cfg.threads = resolve_threads(g.threads);
    std::vector<SceneAnnotation> scenes(a.scenes);
    parallel_for(a.scenes, cfg.threads, [&](std::size_t i) { scenes[i] = generate_scene(sc, i); });
    const StudyReport rep = run_perturbation_study(scenes, cfg);
    if (g.json) {
        ordered_json j{{"command", "study"},        {"scenes", a.scenes},
                       {"seed", a.seed},            {"texts", rep.texts},
                       {"calibration", a.calibration}, {"delta_t", rep.delta_t}};
        j["rows"] = ordered_json::array();
        for (const auto& r : rep.rows) {
            j["rows"].push_back({{"k", r.k},
                                 {"mean_iou_adaptive", r.mean_iou_adaptive},
                                 {"mean_iou_fixed", r.mean_iou_fixed}});
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "scenes " << a.scenes << " texts " << rep.texts << " seed " << a.seed << " calibration "
                  << a.calibration << " delta_t " << io::format_fixed(rep.delta_t, 4) << '\n';
        std::cout << "k adaptive fixed diff\n";
        for (const auto& r : rep.rows) {
            std::cout << r.k << ' ' << io::format_fixed(r.mean_iou_adaptive, 4) << ' '
                      << io::format_fixed(r.mean_iou_fixed, 4) << ' '
                      << io::format_fixed(r.mean_iou_adaptive - r.mean_iou_fixed, 4) << '\n';
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// loss-check

int cmd_loss_check(std::size_t trials, std::uint64_t seed, double tolerance, const Globals& g) {
    const auto results = run_gradient_checks(trials, seed);
    bool ok = true;
    ordered_json j{{"command", "loss-check"}, {"trials", trials}, {"tolerance", tolerance}};
    for (const auto& r : results) {
        const bool pass = r.max_rel_error < tolerance;
        ok = ok && pass;
        if (g.json) {
            j["losses"].push_back({{"loss", r.loss}, {"max_rel_error", r.max_rel_error}, {"pass", pass}});
        } else {
            std::ostringstream os;
            os.precision(3);
            os << std::scientific << r.max_rel_error;
            std::cout << r.loss << " max_rel_error " << os.str() << (pass ? " PASS" : " FAIL") << '\n';
        }
    }
    if (g.json) std::cout << j.dump(2) << '\n';
    return ok ? kExitOk : kExitData;
}

// ---------------------------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::size_t scenes = 10;
    std::string size = "640x640";
    std::size_t repeat = 10;
    std::uint64_t seed = 42;
    double sigma = 0.0;
    PostprocFlags flags;
};

int cmd_bench(const BenchArgs& a, const Globals& g) {
    BenchConfig cfg;
    cfg.synth.seed = a.seed;
    std::tie(cfg.synth.width, cfg.synth.height) = parse_size(a.size);
    cfg.scenes = a.scenes;
    cfg.repeat = a.repeat;
    cfg.sigma = a.sigma;
    cfg.postproc = a.flags.config();
    const BenchReport rep = run_bench(cfg);
    if (g.json) {
        std::cout << ordered_json{{"command", "bench"},
                                  {"size", a.size},
                                  {"scenes", a.scenes},
                                  {"repeat", a.repeat},
                                  {"detections", rep.detections},
                                  {"total", latency_json(rep.total)},
                                  {"binarize", latency_json(rep.binarize)},
                                  {"components", latency_json(rep.components)},
                                  {"trace", latency_json(rep.trace)},
                                  {"extend", latency_json(rep.extend)}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    std::cout << "post-processing " << a.size << " scenes " << a.scenes << " repeat " << a.repeat << " detections "
              << rep.detections << '\n';
    auto line = [](const char* name, const LatencyStats& s) {
        std::cout << name << " mean " << io::format_fixed(s.mean, 3) << " p50 " << io::format_fixed(s.p50, 3)
                  << " p99 " << io::format_fixed(s.p99, 3) << " ms\n";
    };
    line("total     ", rep.total);
    line("binarize  ", rep.binarize);
    line("components", rep.components);
    line("trace     ", rep.trace);
    line("extend    ", rep.extend);
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// render

int cmd_render(const std::string& ann_path, const std::vector<std::string>& det_paths, const std::string& out,
               const Globals& g) {
    const SceneAnnotation ann = io::read_annotation(ann_path);
    std::vector<Detection> dets;
    for (const auto& p : det_paths) {
        auto f = io::read_detections(p);
        dets.insert(dets.end(), f.detections.begin(), f.detections.end());
    }
    make_parent(out);
    io::render_overlay(ann, dets).write_ppm(out);
    if (g.json) {
        std::cout << ordered_json{{"command", "render"}, {"out", out}, {"detections", dets.size()}}.dump(2) << '\n';
    } else {
        std::cout << "wrote " << out << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::string out;
    std::size_t scenes = 10;
    std::uint64_t seed = 42;
    std::string size = "640x640";
    std::string family = "mixed";
    int min_instances = 1, max_instances = 5;
    double ignore_probability = 0.1;
    double separation = 8.0;
    bool maps = false;
    double sigma = 0.0;
    double delta_s = 0.4;
};

int cmd_synth(const SynthArgs& a, const Globals& g) {
    SynthConfig sc;
    sc.seed = a.seed;
    std::tie(sc.width, sc.height) = parse_size(a.size);
    sc.family = *parse_shape_family(a.family);
    sc.min_instances = a.min_instances;
    sc.max_instances = a.max_instances;
    sc.ignore_probability = a.ignore_probability;
    sc.min_separation = a.separation;
    try {
        sc.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    fs::create_directories(a.out);
    parallel_for(a.scenes, resolve_threads(g.threads), [&](std::size_t i) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "scene_%05zu", i);
        const fs::path base = fs::path(a.out) / stem;
        const SceneAnnotation ann = generate_scene(sc, i);
        io::write_annotation(fs::path(base.string() + ".txt"), ann);
        if (a.maps) {
            const OraclePredictions pred =
                oracle_predictions(gen_labels(ann, ShrinkParams(a.delta_s), 1), a.sigma, a.seed + i);
            io::write_map(base.string() + ".prob.map", pred.shrink_prob);
            io::write_map(base.string() + ".offset.map", pred.offset_pred);
        }
    });
    if (g.json) {
        std::cout << ordered_json{{"command", "synth"}, {"scenes", a.scenes}, {"out", a.out}}.dump(2) << '\n';
    } else {
        std::cout << "wrote " << a.scenes << " scenes to " << a.out << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shrink-mask text detection toolkit: labels, reconstruction, evaluation and studies"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores; SHRINKMASK_THREADS overrides)");
    app.add_flag("--json", g.json, "Print the report as JSON");

    GenLabelsArgs gl;
    auto* c_gl = app.add_subcommand("gen-labels", "Generate shrink/offset/SPW/ignore maps from annotations");
    c_gl->add_option("--ann", gl.ann_dir, "Directory of annotation files (*.txt)")->required()->check(CLI::ExistingDirectory);
    c_gl->add_option("--out", gl.out_dir, "Output directory for map files")->required();
    c_gl->add_option("--delta-s", gl.delta_s, "Shrink coefficient in (0,1)")
        ->check(CLI::Validator(
            [](std::string& s) {
                const auto v = io::parse_real(s);
                return v && *v > 0.0 && *v < 1.0 ? std::string{} : "must lie strictly between 0 and 1";
            },
            "(0,1)"))
        ->capture_default_str();
    c_gl->add_option("--window", gl.window, "Anchor window side in px")->check(CLI::PositiveNumber)->capture_default_str();
    c_gl->add_option("--spw-valid-region", gl.spw_region, "Pixels where SPW is supervised")
        ->check(CLI::IsMember({"all", "shrink-only"}))
        ->capture_default_str();

    ReconstructArgs rc;
    auto* c_rc = app.add_subcommand("reconstruct", "Rebuild text contours from shrink and offset maps");
    c_rc->add_option("--shrink", rc.shrink, "Shrink probability map")->required()->check(CLI::ExistingFile);
    c_rc->add_option("--offset", rc.offset, "Offset map")->required()->check(CLI::ExistingFile);
    c_rc->add_option("--mode", rc.mode, "Extension mode")->check(CLI::IsMember({"adaptive", "fixed"}))->capture_default_str();
    c_rc->add_option("--delta-t", rc.delta_t, "Fixed-mode extending coefficient")->check(CLI::PositiveNumber);
    c_rc->add_option("--out", rc.out, "Detection file to write")->required();
    c_rc->add_flag("--timing-in-file", rc.timing_in_file, "Also record the timing breakdown in the detection file");
    rc.flags.add(c_rc);

    EvaluateArgs ev;
    auto* c_ev = app.add_subcommand("evaluate", "Precision/recall/F-measure of detections against ground truth");
    c_ev->add_option("--det", ev.det_dir, "Directory of detection files (*.det)")->required()->check(CLI::ExistingDirectory);
    c_ev->add_option("--gt", ev.gt_dir, "Directory of annotation files (*.txt)")->required()->check(CLI::ExistingDirectory);
    c_ev->add_option("--iou", ev.iou, "Comma-separated IoU thresholds")->capture_default_str();
    c_ev->add_option("--ignore-overlap", ev.ignore_overlap, "DO-NOT-CARE overlap fraction")->capture_default_str();

    StudyArgs st;
    auto* c_st = app.add_subcommand("study", "Perturbation study of adaptive vs fixed extension");
    c_st->add_option("--scenes", st.scenes, "Number of synthetic scenes")->check(CLI::PositiveNumber)->capture_default_str();
    c_st->add_option("--seed", st.seed, "Scene seed")->capture_default_str();
    c_st->add_option("--k", st.k, "Perturbation radii: a..b or a comma list")->capture_default_str();
    c_st->add_option("--size", st.size, "Image size WxH")->capture_default_str();
    c_st->add_option("--family", st.family, "Shape family")
        ->check(CLI::IsMember({"rectangle", "rotated-rect", "curved-band", "mixed"}))
        ->capture_default_str();
    c_st->add_option("--calibration", st.calibration, "Fixed-mode calibration")
        ->check(CLI::IsMember({"per-instance", "global"}))
        ->capture_default_str();
    c_st->add_option("--delta-t", st.delta_t, "Use this fixed-mode coefficient instead of calibrating")
        ->check(CLI::PositiveNumber);
    c_st->add_option("--delta-s", st.delta_s, "Shrink coefficient")->check(CLI::Range(0.01, 0.99))->capture_default_str();
    st.flags.add(c_st);

    std::size_t lc_trials = 50;
    std::uint64_t lc_seed = 1;
    double lc_tol = 1e-4;
    auto* c_lc = app.add_subcommand("loss-check", "Finite-difference validation of the loss gradients");
    c_lc->add_option("--trials", lc_trials, "Random instances per loss")->check(CLI::PositiveNumber)->capture_default_str();
    c_lc->add_option("--seed", lc_seed, "Instance seed")->capture_default_str();
    c_lc->add_option("--tolerance", lc_tol, "Maximum relative error")->capture_default_str();

    BenchArgs bn;
    auto* c_bn = app.add_subcommand("bench", "Post-processing latency on oracle maps");
    c_bn->add_option("--scenes", bn.scenes, "Number of synthetic scenes")->check(CLI::PositiveNumber)->capture_default_str();
    c_bn->add_option("--size", bn.size, "Image size WxH")->capture_default_str();
    c_bn->add_option("--repeat", bn.repeat, "Repetitions per scene")->check(CLI::PositiveNumber)->capture_default_str();
    c_bn->add_option("--seed", bn.seed, "Scene seed")->capture_default_str();
    c_bn->add_option("--sigma", bn.sigma, "Oracle noise")->check(CLI::NonNegativeNumber)->capture_default_str();
    bn.flags.add(c_bn);

    std::string rd_ann, rd_out;
    std::vector<std::string> rd_det;
    auto* c_rd = app.add_subcommand("render", "Draw ground truth and detections into a PPM image");
    c_rd->add_option("--ann", rd_ann, "Annotation file")->required()->check(CLI::ExistingFile);
    c_rd->add_option("--det", rd_det, "Detection file(s)")->check(CLI::ExistingFile);
    c_rd->add_option("--out", rd_out, "Output image (.ppm)")->required();

    SynthArgs sy;
    auto* c_sy = app.add_subcommand("synth", "Write synthetic annotations and optional oracle maps");
    c_sy->add_option("--out", sy.out, "Output directory")->required();
    c_sy->add_option("--scenes", sy.scenes, "Number of scenes")->capture_default_str();
    c_sy->add_option("--seed", sy.seed, "Scene seed")->capture_default_str();
    c_sy->add_option("--size", sy.size, "Image size WxH")->capture_default_str();
    c_sy->add_option("--family", sy.family, "Shape family")
        ->check(CLI::IsMember({"rectangle", "rotated-rect", "curved-band", "mixed"}))
        ->capture_default_str();
    c_sy->add_option("--min-instances", sy.min_instances, "Minimum instances per scene")->capture_default_str();
    c_sy->add_option("--max-instances", sy.max_instances, "Maximum instances per scene")->capture_default_str();
    c_sy->add_option("--ignore-probability", sy.ignore_probability, "Chance an instance is DO NOT CARE")
        ->capture_default_str();
    c_sy->add_option("--separation", sy.separation, "Minimum distance between instances in px")->capture_default_str();
    c_sy->add_flag("--maps", sy.maps, "Also write oracle probability and offset maps");
    c_sy->add_option("--sigma", sy.sigma, "Oracle noise")->check(CLI::NonNegativeNumber)->capture_default_str();
    c_sy->add_option("--delta-s", sy.delta_s, "Shrink coefficient for oracle maps")
        ->check(CLI::Range(0.01, 0.99))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_gl) return cmd_gen_labels(gl, g);
        if (*c_rc) return cmd_reconstruct(rc, g);
        if (*c_ev) return cmd_evaluate(ev, g);
        if (*c_st) return cmd_study(st, g);
        if (*c_lc) return cmd_loss_check(lc_trials, lc_seed, lc_tol, g);
        if (*c_bn) return cmd_bench(bn, g);
        if (*c_rd) return cmd_render(rd_ann, rd_det, rd_out, g);
        if (*c_sy) return cmd_synth(sy, g);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
