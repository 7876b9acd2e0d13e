#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "shrinkmask/geometry/polygon.hpp"

namespace shrinkmask {

enum class ExtendMode { Adaptive, Fixed };

[[nodiscard]] inline std::string_view to_string(ExtendMode m) {
    return m == ExtendMode::Adaptive ? "adaptive" : "fixed";
}

[[nodiscard]] inline std::optional<ExtendMode> parse_extend_mode(std::string_view s) {
    if (s == "adaptive") return ExtendMode::Adaptive;
    if (s == "fixed") return ExtendMode::Fixed;
    return std::nullopt;
}

/// A rebuilt text contour together with the shrink contour it grew from.
struct Detection {
    Polygon contour;
    double score = 0.0;
    Polygon shrink_contour;
    double offset_used = 0.0;
    ExtendMode mode = ExtendMode::Adaptive;
};

}  // namespace shrinkmask
