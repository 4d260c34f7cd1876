#pragma once

#include <span>
#include <vector>

#include "burst/image.hpp"

namespace burst {

/// Raised-cosine analysis window w(i) = 0.5 - 0.5*cos(2*pi*(i+0.5)/size).
/// At half-overlap the shifted copies sum to exactly 1 per axis, so
/// overlap-add of windowed tiles is a partition of unity.
std::vector<double> raised_cosine_window(int size);

/// Half-overlapped tiling for the spectral operations. Tile origins start at
/// -tile/2 (the image is conceptually extended by reflection) and step by
/// tile/2, so every image pixel is covered by exactly two tiles per axis.
struct OverlapGrid {
    int width = 0;
    int height = 0;
    int tile = 0;
    int stride = 0;
    int nx = 0;
    int ny = 0;

    static OverlapGrid make(int width, int height, int tile);

    int origin_x(int i) const { return i * stride - tile / 2; }
    int origin_y(int j) const { return j * stride - tile / 2; }
};

/// Extract a tile at (ox, oy) in image coordinates, folding out-of-range
/// reads by reflection; (dx, dy) displaces the read position first.
void extract_tile(const GrayImage& img, int ox, int oy, int tile, int dx, int dy,
                  std::span<double> out);

/// Multiply a tile by the separable raised-cosine window.
void apply_window(std::span<double> tile, std::span<const double> window, int size);

/// Accumulator for windowed overlap-add reconstruction; divide() normalizes
/// by the accumulated window weight.
struct OverlapAccumulator {
    explicit OverlapAccumulator(int width, int height)
        : width_(width), height_(height),
          value_(static_cast<std::size_t>(width) * height, 0.0),
          weight_(static_cast<std::size_t>(width) * height, 0.0) {}

    void add_tile(int ox, int oy, int tile, std::span<const double> values,
                  std::span<const double> window);
    GrayImage normalized() const;

  private:
    int width_;
    int height_;
    std::vector<double> value_;
    std::vector<double> weight_;
};

}  // namespace burst
