#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shrinkmask/error.hpp"

namespace shrinkmask {

/// Dense row-major grid with explicit width x height.
template <class T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw InvalidArgument("grid dimensions must be positive, got " + std::to_string(width) + "x" +
                                  std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }
    Grid(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
        if (width <= 0 || height <= 0) throw InvalidArgument("grid dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw InvalidArgument("grid payload does not match width*height");
        }
    }

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }
    [[nodiscard]] bool empty() const { return data_.empty(); }

    [[nodiscard]] T& operator()(int row, int col) { return data_[index(row, col)]; }
    [[nodiscard]] const T& operator()(int row, int col) const { return data_[index(row, col)]; }
    [[nodiscard]] T& operator[](std::size_t i) { return data_[i]; }
    [[nodiscard]] const T& operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] bool in_bounds(int row, int col) const {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    [[nodiscard]] std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    [[nodiscard]] const std::vector<T>& data() const { return data_; }
    [[nodiscard]] std::vector<T>& data() { return data_; }

    [[nodiscard]] bool same_shape(int w, int h) const { return w == width_ && h == height_; }
    template <class U>
    [[nodiscard]] bool same_shape(const Grid<U>& o) const {
        return o.width() == width_ && o.height() == height_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Boolean grid; stored one byte per pixel (0 or 1).
using BitMask = Grid<std::uint8_t>;
/// Real-valued grid.
using FloatMap = Grid<double>;

[[nodiscard]] inline std::size_t popcount(const BitMask& m) {
    std::size_t n = 0;
    for (auto b : m.data()) n += b != 0;
    return n;
}

template <class A, class B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeMismatch(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                            std::to_string(b.height()));
    }
}

[[nodiscard]] inline FloatMap to_float(const BitMask& m) {
    FloatMap out(m.width(), m.height(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 1.0 : 0.0;
    return out;
}

}  // namespace shrinkmask
