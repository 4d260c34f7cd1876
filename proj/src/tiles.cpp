#include "burst/tiles.hpp"

#include <cmath>
#include <numbers>

namespace burst {

std::vector<double> raised_cosine_window(int size) {
    if (size < 2) throw ConfigError("raised_cosine_window: size must be >= 2");
    std::vector<double> w(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i)
        w[static_cast<std::size_t>(i)] =
            0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 0.5) / size);
    return w;
}

OverlapGrid OverlapGrid::make(int width, int height, int tile) {
    if (tile < 2 || (tile & (tile - 1)) != 0)
        throw ConfigError("overlap grid: tile size must be a power of two >= 2, got " +
                          std::to_string(tile));
    OverlapGrid g;
    g.width = width;
    g.height = height;
    g.tile = tile;
    g.stride = tile / 2;
    g.nx = (width + g.stride - 1) / g.stride + 1;
    g.ny = (height + g.stride - 1) / g.stride + 1;
    return g;
}

void extract_tile(const GrayImage& img, int ox, int oy, int tile, int dx, int dy,
                  std::span<double> out) {
    for (int v = 0; v < tile; ++v) {
        const int y = reflect_index(oy + v + dy, img.height);
        for (int u = 0; u < tile; ++u) {
            const int x = reflect_index(ox + u + dx, img.width);
            out[static_cast<std::size_t>(v) * tile + u] = img.at(x, y);
        }
    }
}

void apply_window(std::span<double> tile, std::span<const double> window, int size) {
    for (int v = 0; v < size; ++v)
        for (int u = 0; u < size; ++u)
            tile[static_cast<std::size_t>(v) * size + u] *=
                window[static_cast<std::size_t>(v)] * window[static_cast<std::size_t>(u)];
}

void OverlapAccumulator::add_tile(int ox, int oy, int tile, std::span<const double> values,
                                  std::span<const double> window) {
    for (int v = 0; v < tile; ++v) {
        const int y = oy + v;
        if (y < 0 || y >= height_) continue;
        for (int u = 0; u < tile; ++u) {
            const int x = ox + u;
            if (x < 0 || x >= width_) continue;
            const double w = window[static_cast<std::size_t>(v)] * window[static_cast<std::size_t>(u)];
            const std::size_t idx = static_cast<std::size_t>(y) * width_ + x;
            value_[idx] += values[static_cast<std::size_t>(v) * tile + u];
            weight_[idx] += w;
        }
    }
}

GrayImage OverlapAccumulator::normalized() const {
    GrayImage out(width_, height_);
    for (std::size_t i = 0; i < value_.size(); ++i)
        out.data[i] = weight_[i] > 0.0 ? static_cast<float>(value_[i] / weight_[i]) : 0.0f;
    return out;
}

}  // namespace burst
