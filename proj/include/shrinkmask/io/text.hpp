#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "shrinkmask/geometry/polygon.hpp"

namespace shrinkmask::io {

/// Shortest decimal form that parses back to the same double.
[[nodiscard]] inline std::string format_real(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

/// Fixed-point form with `digits` decimals.
[[nodiscard]] inline std::string format_fixed(double v, int digits) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, end);
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

/// Finite real occupying the whole of `s`.
[[nodiscard]] inline std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <class Int>
[[nodiscard]] std::optional<Int> parse_int(std::string_view s) {
    s = trim(s);
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) return out;
        start = at + 1;
    }
}

/// "x1,y1,x2,y2,..." with shortest round-trip coordinates.
[[nodiscard]] inline std::string format_coords(const Polygon& poly) {
    std::string out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (i) out += ',';
        out += format_real(poly[i].x);
        out += ',';
        out += format_real(poly[i].y);
    }
    return out;
}

/// Parses an even-length coordinate list into a validated polygon; the error text says what is wrong.
[[nodiscard]] inline Polygon parse_coords(std::span<const std::string_view> tokens) {
    if (tokens.size() % 2 != 0) {
        throw InvalidArgument("odd coordinate count " + std::to_string(tokens.size()));
    }
    if (tokens.size() < 6) {
        throw InvalidArgument("need at least 3 points, got " + std::to_string(tokens.size() / 2));
    }
    std::vector<Point2> pts;
    pts.reserve(tokens.size() / 2);
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
        const auto x = parse_real(tokens[i]);
        const auto y = parse_real(tokens[i + 1]);
        if (!x || !y) {
            throw InvalidArgument("bad coordinate '" + std::string(trim(!x ? tokens[i] : tokens[i + 1])) + "'");
        }
        pts.emplace_back(*x, *y);
    }
    return Polygon(std::move(pts));
}

}  // namespace shrinkmask::io
