#pragma once

#include <span>
#include <string>
#include <vector>

#include "burst/image.hpp"

namespace burst {

/// Gaussian pyramid for coarse-to-fine alignment. Level 0 is the finest
/// (the unblurred input); factors[k] is the integer downsample step from
/// level k to level k+1.
struct Pyramid {
    std::vector<GrayImage> levels;
    std::vector<int> factors;
};

struct PyramidConfig {
    int n_levels = 4;
    std::vector<int> factors = {2, 4, 4};
    double blur_sigma_scale = 0.5;  // blur sigma = scale * factor
};

std::vector<double> gaussian_kernel(double sigma);  // truncated at 3 sigma, sums to 1

/// Blur with sigma = blur_sigma_scale * factor (edge-clamped), then keep
/// every factor-th sample starting at 0; output dims are ceil(dim/factor).
GrayImage gaussian_downsample(const GrayImage& image, int factor, double blur_sigma_scale = 0.5);

/// min_level_sizes, when given, is the smallest acceptable width/height per
/// level (e.g. the alignment tile size used there); a level below its
/// minimum raises an error naming the level.
Pyramid build_pyramid(const GrayImage& image, const PyramidConfig& config,
                      std::span<const int> min_level_sizes = {});

/// Soft checks: warns when depth < 4 levels or when the coarsest level is
/// smaller than 1/16 of the input along either axis.
std::vector<std::string> validate_pyramid_config(const PyramidConfig& config, int width,
                                                 int height);

}  // namespace burst
