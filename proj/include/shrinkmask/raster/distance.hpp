#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "shrinkmask/raster/grid.hpp"

namespace shrinkmask {

namespace detail {

inline constexpr double kFar = 1e20;

/// Exact 1-D squared distance transform (lower envelope of parabolas) over `n` samples
/// spaced `stride` apart in `f`, written back in place.
inline void edt_1d(double* f, std::size_t n, std::size_t stride, std::vector<double>& d,
                   std::vector<int>& v, std::vector<double>& z) {
    d.resize(n);
    v.resize(n);
    z.resize(n + 1);
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto meet = [&](int q, int p) {
        return ((f[q * stride] + double(q) * q) - (f[p * stride] + double(p) * p)) / (2.0 * (q - p));
    };
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < static_cast<int>(n); ++q) {
        double s = meet(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = meet(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < static_cast<int>(n); ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k] * stride];
    }
    for (std::size_t q = 0; q < n; ++q) f[q * stride] = d[q];
}

/// Squared Euclidean distance from every pixel centre to the nearest site pixel centre.
/// Pixels with no site anywhere keep a value >= kFar.
inline FloatMap squared_edt(const BitMask& sites) {
    const int w = sites.width(), h = sites.height();
    FloatMap f(w, h, 0.0);
    for (std::size_t i = 0; i < sites.size(); ++i) f[i] = sites[i] ? 0.0 : kFar;
    std::vector<double> d;
    std::vector<int> v;
    std::vector<double> z;
    for (int c = 0; c < w; ++c) edt_1d(&f.data()[c], static_cast<std::size_t>(h), static_cast<std::size_t>(w), d, v, z);
    for (int r = 0; r < h; ++r) edt_1d(&f.data()[static_cast<std::size_t>(r) * w], static_cast<std::size_t>(w), 1, d, v, z);
    return f;
}

}  // namespace detail

/// Exact Euclidean distance from each set pixel to the nearest unset pixel centre.
/// Pixels beyond the grid count as unset, so the result is always finite; unset pixels get 0.
[[nodiscard]] inline FloatMap distance_transform(const BitMask& mask) {
    const int w = mask.width(), h = mask.height();
    BitMask sites(w + 2, h + 2, 1);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) sites(r + 1, c + 1) = mask(r, c) ? 0 : 1;
    }
    const FloatMap sq = detail::squared_edt(sites);
    FloatMap out(w, h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) out(r, c) = std::sqrt(sq(r + 1, c + 1));
    }
    return out;
}

/// Euclidean distance from each pixel to the nearest set pixel, ignoring the image border.
/// Infinite when the mask is empty.
[[nodiscard]] inline FloatMap distance_to_set(const BitMask& mask) {
    FloatMap sq = detail::squared_edt(mask);
    for (auto& x : sq.data()) x = x >= detail::kFar * 0.5 ? std::numeric_limits<double>::infinity() : std::sqrt(x);
    return sq;
}

}  // namespace shrinkmask
