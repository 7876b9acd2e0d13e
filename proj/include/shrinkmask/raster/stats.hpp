#pragma once

#include "shrinkmask/error.hpp"
#include "shrinkmask/raster/grid.hpp"

namespace shrinkmask {

/// Arithmetic mean of `map` over the set pixels of `mask`, summed in row-major order.
[[nodiscard]] inline double mask_mean_inside(const FloatMap& map, const BitMask& mask) {
    require_same_shape(map, mask, "mask_mean_inside");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        sum += map[i];
        ++n;
    }
    if (n == 0) throw EmptyMask("mask_mean_inside: mask has no set pixels");
    return sum / static_cast<double>(n);
}

}  // namespace shrinkmask
