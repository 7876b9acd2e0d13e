#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "shrinkmask/io/text.hpp"
#include "shrinkmask/labelgen.hpp"

namespace shrinkmask::io {

/// Marker ending a DO-NOT-CARE polygon line.
inline constexpr std::string_view kIgnoreMarker = "###";

/// Reads an annotation: optional "# size WxH" first line, other '#' lines are comments, one
/// polygon "x1,y1,...,xn,yn[,###]" per line. Without a size header the image size is the
/// ceiling of the largest coordinate. Errors carry "source:line".
[[nodiscard]] inline SceneAnnotation parse_annotation(std::istream& in, const std::string& source) {
    SceneAnnotation ann;
    bool sized = false;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        line = trim(line);
        const std::string where = source + ":" + std::to_string(line_no);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            if (line_no == 1 && body.starts_with("size")) {
                body = trim(body.substr(4));
                const auto x = body.find('x');
                const auto w = x == std::string_view::npos ? std::nullopt : parse_int<int>(body.substr(0, x));
                const auto h = x == std::string_view::npos ? std::nullopt : parse_int<int>(body.substr(x + 1));
                if (!w || !h || *w <= 0 || *h <= 0) throw ParseError(where, "malformed size header, expected '# size WxH'");
                ann.width = *w;
                ann.height = *h;
                sized = true;
            }
            continue;
        }
        auto tokens = split(line, ',');
        bool ignore = false;
        if (tokens.size() > 1 && trim(tokens.back()) == kIgnoreMarker) {
            ignore = true;
            tokens.pop_back();
        }
        try {
            Polygon poly = parse_coords(tokens);
            (ignore ? ann.ignores : ann.texts).push_back(std::move(poly));
        } catch (const InvalidArgument& e) {
            throw ParseError(where, e.what());
        }
    }
    if (!sized) {
        double max_x = 1.0, max_y = 1.0;
        for (const auto* list : {&ann.texts, &ann.ignores}) {
            for (const auto& p : *list) {
                max_x = std::max(max_x, p.bounds().max_x);
                max_y = std::max(max_y, p.bounds().max_y);
            }
        }
        ann.width = static_cast<int>(std::ceil(max_x));
        ann.height = static_cast<int>(std::ceil(max_y));
    }
    return ann;
}

[[nodiscard]] inline SceneAnnotation read_annotation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open file");
    return parse_annotation(in, path.string());
}

inline void write_annotation(std::ostream& out, const SceneAnnotation& ann) {
    out << "# size " << ann.width << 'x' << ann.height << '\n';
    for (const auto& p : ann.texts) out << format_coords(p) << '\n';
    for (const auto& p : ann.ignores) out << format_coords(p) << ',' << kIgnoreMarker << '\n';
}

inline void write_annotation(const std::filesystem::path& path, const SceneAnnotation& ann) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_annotation(out, ann);
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace shrinkmask::io
