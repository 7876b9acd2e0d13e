#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "shrinkmask/error.hpp"
#include "shrinkmask/raster/grid.hpp"

namespace shrinkmask::io {

/// Binary grid file: "MAPF" | version u8 | dtype u8 | width u32 LE | height u32 LE | payload.
/// Masks are packed 8 pixels per byte, most significant bit first, each row padded to a
/// whole byte; float maps are IEEE-754 binary32 little-endian.
inline constexpr std::array<char, 4> kMapMagic{'M', 'A', 'P', 'F'};
inline constexpr std::uint8_t kMapVersion = 1;
inline constexpr std::size_t kMapHeaderSize = 14;

enum class MapDtype : std::uint8_t { Mask = 0, Float32 = 1 };

using MapData = std::variant<BitMask, FloatMap>;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline std::string header(MapDtype dtype, int width, int height) {
    std::string out(kMapMagic.begin(), kMapMagic.end());
    out.push_back(static_cast<char>(kMapVersion));
    out.push_back(static_cast<char>(dtype));
    put_u32(out, static_cast<std::uint32_t>(width));
    put_u32(out, static_cast<std::uint32_t>(height));
    return out;
}

inline std::size_t row_bytes(std::size_t width) { return (width + 7) / 8; }

}  // namespace detail

[[nodiscard]] inline std::string encode_map(const BitMask& mask) {
    std::string out = detail::header(MapDtype::Mask, mask.width(), mask.height());
    const std::size_t stride = detail::row_bytes(static_cast<std::size_t>(mask.width()));
    for (int r = 0; r < mask.height(); ++r) {
        std::string row(stride, '\0');
        for (int c = 0; c < mask.width(); ++c) {
            if (mask(r, c)) row[static_cast<std::size_t>(c) / 8] |= static_cast<char>(0x80u >> (c % 8));
        }
        out += row;
    }
    return out;
}

/// Values are narrowed to binary32.
[[nodiscard]] inline std::string encode_map(const FloatMap& map) {
    std::string out = detail::header(MapDtype::Float32, map.width(), map.height());
    out.reserve(out.size() + 4 * map.size());
    for (double v : map.data()) detail::put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

[[nodiscard]] inline MapData decode_map(const std::string& bytes, const std::string& source) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data());
    if (bytes.size() < kMapHeaderSize) throw ParseError(source, "truncated map header");
    if (!std::equal(kMapMagic.begin(), kMapMagic.end(), bytes.begin())) throw ParseError(source, "bad magic, expected MAPF");
    if (p[4] != kMapVersion) throw ParseError(source, "unsupported map version " + std::to_string(p[4]));
    const std::uint32_t w = detail::get_u32(p + 6), h = detail::get_u32(p + 10);
    if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
        throw ParseError(source, "invalid map size " + std::to_string(w) + "x" + std::to_string(h));
    }
    const std::size_t payload = bytes.size() - kMapHeaderSize;
    const std::uint8_t* data = p + kMapHeaderSize;
    auto check_len = [&](std::size_t expected) {
        if (payload != expected) {
            throw ParseError(source, "payload is " + std::to_string(payload) + " bytes, header implies " +
                                         std::to_string(expected));
        }
    };
    const int iw = static_cast<int>(w), ih = static_cast<int>(h);
    switch (p[5]) {
        case static_cast<std::uint8_t>(MapDtype::Mask): {
            const std::size_t stride = detail::row_bytes(w);
            check_len(stride * h);
            BitMask mask(iw, ih, 0);
            for (int r = 0; r < ih; ++r) {
                for (int c = 0; c < iw; ++c) {
                    mask(r, c) = (data[static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(c) / 8] >>
                                  (7 - c % 8)) & 1u;
                }
            }
            return mask;
        }
        case static_cast<std::uint8_t>(MapDtype::Float32): {
            check_len(4ull * w * h);
            FloatMap map(iw, ih, 0.0);
            for (std::size_t i = 0; i < map.size(); ++i) {
                const float v = std::bit_cast<float>(detail::get_u32(data + 4 * i));
                if (!std::isfinite(v)) throw ParseError(source, "non-finite value at index " + std::to_string(i));
                map[i] = v;
            }
            return map;
        }
        default:
            throw ParseError(source, "unknown dtype " + std::to_string(p[5]));
    }
}

[[nodiscard]] inline MapData read_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open file");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_map(bytes, path.string());
}

/// Reads either dtype as real values (mask pixels become 0 or 1).
[[nodiscard]] inline FloatMap read_float_map(const std::filesystem::path& path) {
    MapData d = read_map(path);
    if (auto* m = std::get_if<BitMask>(&d)) return to_float(*m);
    return std::get<FloatMap>(std::move(d));
}

[[nodiscard]] inline BitMask read_mask(const std::filesystem::path& path) {
    MapData d = read_map(path);
    if (auto* m = std::get_if<BitMask>(&d)) return std::move(*m);
    throw ParseError(path.string(), "expected a mask map, found a float map");
}

inline void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

template <class T>
void write_map(const std::filesystem::path& path, const Grid<T>& grid) {
    write_bytes(path, encode_map(grid));
}

}  // namespace shrinkmask::io
