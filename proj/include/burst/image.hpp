#pragma once

#include <cstddef>
#include <vector>

#include "burst/error.hpp"

namespace burst {

/// Single-channel raster, row-major. Values are nominally in [0,1] once an
/// image has been produced by a load or convert step; intermediate math may
/// exceed that range.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    GrayImage() = default;
    GrayImage(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const float& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t pixel_count() const { return data.size(); }
    bool same_shape(const GrayImage& other) const {
        return width == other.width && height == other.height;
    }
};

// Index folding for border policies.
int clamp_index(int i, int n);
int reflect_index(int i, int n);  // symmetric reflection, edge sample included

float sample_clamped(const GrayImage& img, int x, int y);
float sample_reflected(const GrayImage& img, int x, int y);

double image_mean(const GrayImage& img);
double image_variance(const GrayImage& img);
double mean_squared_error(const GrayImage& a, const GrayImage& b);
double psnr(const GrayImage& a, const GrayImage& b);  // peak value 1.0

GrayImage clamp01(GrayImage img);

}  // namespace burst
