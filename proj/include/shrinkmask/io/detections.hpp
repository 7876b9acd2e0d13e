#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "shrinkmask/io/text.hpp"
#include "shrinkmask/postproc.hpp"

namespace shrinkmask::io {

/// Text detection file:
///   # shrinkmask detections v1
///   # config threshold=... min_area=... min_score=... mode=... delta_t=... aggregation=... band=... simplify=...
///   # timing binarize_ms=... components_ms=... trace_ms=... extend_ms=... total_ms=...   (optional)
///   det score=0.123456 mode=adaptive offset=<real> contour=x,y,... shrink=x,y,...
/// Scores carry 6 decimals; coordinates and offsets use shortest round-trip form.
inline constexpr std::string_view kDetectionHeader = "# shrinkmask detections v1";

struct DetectionFile {
    std::vector<Detection> detections;
    std::optional<PostprocConfig> config;
    std::optional<TimingBreakdown> timing;
};

[[nodiscard]] inline std::string format_config(const PostprocConfig& cfg) {
    std::ostringstream os;
    os << "threshold=" << format_real(cfg.binarize_threshold) << " min_area=" << format_real(cfg.min_area)
       << " min_score=" << format_real(cfg.min_score) << " mode=" << to_string(cfg.extend_mode)
       << " delta_t=" << format_real(cfg.delta_t) << " aggregation=" << to_string(cfg.offset_aggregation)
       << " band=" << format_real(cfg.band_width) << " simplify=" << format_real(cfg.simplify_tolerance);
    return os.str();
}

[[nodiscard]] inline std::string format_timing(const TimingBreakdown& t) {
    std::ostringstream os;
    os << "binarize_ms=" << format_fixed(t.binarize_ms, 4) << " components_ms=" << format_fixed(t.components_ms, 4)
       << " trace_ms=" << format_fixed(t.trace_ms, 4) << " extend_ms=" << format_fixed(t.extend_ms, 4)
       << " total_ms=" << format_fixed(t.total_ms, 4);
    return os.str();
}

inline void write_detections(std::ostream& out, const DetectionFile& file) {
    out << kDetectionHeader << '\n';
    if (file.config) out << "# config " << format_config(*file.config) << '\n';
    if (file.timing) out << "# timing " << format_timing(*file.timing) << '\n';
    for (const auto& d : file.detections) {
        out << "det score=" << format_fixed(d.score, 6) << " mode=" << to_string(d.mode)
            << " offset=" << format_real(d.offset_used) << " contour=" << format_coords(d.contour)
            << " shrink=" << format_coords(d.shrink_contour) << '\n';
    }
}

[[nodiscard]] inline std::string format_detections(const DetectionFile& file) {
    std::ostringstream os;
    write_detections(os, file);
    return os.str();
}

namespace detail {

/// Splits "k1=v1 k2=v2 ..." into pairs; throws on a field without '='.
inline std::vector<std::pair<std::string_view, std::string_view>> fields(std::string_view s) {
    std::vector<std::pair<std::string_view, std::string_view>> out;
    for (auto tok : split(s, ' ')) {
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) throw InvalidArgument("field '" + std::string(tok) + "' lacks '='");
        out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return out;
}

inline double real_field(std::string_view key, std::string_view v) {
    const auto x = parse_real(v);
    if (!x) throw InvalidArgument("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
    return *x;
}

inline PostprocConfig parse_config(std::string_view s) {
    PostprocConfig cfg;
    for (auto [k, v] : fields(s)) {
        if (k == "threshold") cfg.binarize_threshold = real_field(k, v);
        else if (k == "min_area") cfg.min_area = real_field(k, v);
        else if (k == "min_score") cfg.min_score = real_field(k, v);
        else if (k == "delta_t") cfg.delta_t = real_field(k, v);
        else if (k == "band") cfg.band_width = real_field(k, v);
        else if (k == "simplify") cfg.simplify_tolerance = real_field(k, v);
        else if (k == "mode") {
            const auto m = parse_extend_mode(v);
            if (!m) throw InvalidArgument("unknown mode '" + std::string(v) + "'");
            cfg.extend_mode = *m;
        } else if (k == "aggregation") {
            if (v == "contour-band-mean") cfg.offset_aggregation = OffsetAggregation::ContourBandMean;
            else if (v == "region-mean") cfg.offset_aggregation = OffsetAggregation::RegionMean;
            else throw InvalidArgument("unknown aggregation '" + std::string(v) + "'");
        }
    }
    return cfg;
}

inline TimingBreakdown parse_timing(std::string_view s) {
    TimingBreakdown t;
    for (auto [k, v] : fields(s)) {
        const double x = real_field(k, v);
        if (k == "binarize_ms") t.binarize_ms = x;
        else if (k == "components_ms") t.components_ms = x;
        else if (k == "trace_ms") t.trace_ms = x;
        else if (k == "extend_ms") t.extend_ms = x;
        else if (k == "total_ms") t.total_ms = x;
    }
    return t;
}

inline Detection parse_record(std::string_view s) {
    std::optional<double> score, offset;
    std::optional<ExtendMode> mode;
    std::optional<Polygon> contour, shrink;
    for (auto [k, v] : fields(s)) {
        if (k == "score") score = real_field(k, v);
        else if (k == "offset") offset = real_field(k, v);
        else if (k == "mode") {
            mode = parse_extend_mode(v);
            if (!mode) throw InvalidArgument("unknown mode '" + std::string(v) + "'");
        } else if (k == "contour") contour = parse_coords(split(v, ','));
        else if (k == "shrink") shrink = parse_coords(split(v, ','));
        else throw InvalidArgument("unknown field '" + std::string(k) + "'");
    }
    if (!score || !offset || !mode || !contour || !shrink) {
        throw InvalidArgument("record needs score, mode, offset, contour and shrink");
    }
    return Detection{std::move(*contour), *score, std::move(*shrink), *offset, *mode};
}

}  // namespace detail

[[nodiscard]] inline DetectionFile parse_detections(std::istream& in, const std::string& source) {
    DetectionFile file;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        const std::string where = source + ":" + std::to_string(line_no);
        if (line.empty()) continue;
        try {
            if (line.starts_with("# config ")) {
                file.config = detail::parse_config(line.substr(9));
            } else if (line.starts_with("# timing ")) {
                file.timing = detail::parse_timing(line.substr(9));
            } else if (line.front() == '#') {
                continue;
            } else if (line.starts_with("det ")) {
                file.detections.push_back(detail::parse_record(line.substr(4)));
            } else {
                throw InvalidArgument("unrecognised line");
            }
        } catch (const InvalidArgument& e) {
            throw ParseError(where, e.what());
        }
    }
    return file;
}

[[nodiscard]] inline DetectionFile read_detections(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open file");
    return parse_detections(in, path.string());
}

inline void write_detections(const std::filesystem::path& path, const DetectionFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_detections(out, file);
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace shrinkmask::io
