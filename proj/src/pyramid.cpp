#include "burst/pyramid.hpp"

#include <algorithm>
#include <cmath>

namespace burst {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0) throw ConfigError("gaussian_kernel: sigma must be positive");
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

GrayImage gaussian_downsample(const GrayImage& image, int factor, double blur_sigma_scale) {
    if (factor < 2) throw ConfigError("gaussian_downsample: factor must be >= 2");
    if (blur_sigma_scale <= 0)
        throw ConfigError("gaussian_downsample: blur_sigma_scale must be positive");
    if (image.width < 1 || image.height < 1)
        throw GeometryError("gaussian_downsample: empty image");

    const std::vector<double> kernel = gaussian_kernel(blur_sigma_scale * factor);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    const int out_w = ceil_div(image.width, factor);
    const int out_h = ceil_div(image.height, factor);

    // Horizontal pass, evaluated only at the columns that survive decimation.
    std::vector<double> tmp(static_cast<std::size_t>(out_w) * image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int ox = 0; ox < out_w; ++ox) {
            const int x = ox * factor;
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[static_cast<std::size_t>(t + radius)] *
                       image.at(clamp_index(x + t, image.width), y);
            tmp[static_cast<std::size_t>(y) * out_w + ox] = acc;
        }
    }

    GrayImage out(out_w, out_h);
    for (int oy = 0; oy < out_h; ++oy) {
        const int y = oy * factor;
        for (int ox = 0; ox < out_w; ++ox) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[static_cast<std::size_t>(t + radius)] *
                       tmp[static_cast<std::size_t>(clamp_index(y + t, image.height)) * out_w + ox];
            out.at(ox, oy) = static_cast<float>(acc);
        }
    }
    return out;
}

Pyramid build_pyramid(const GrayImage& image, const PyramidConfig& config,
                      std::span<const int> min_level_sizes) {
    if (config.n_levels < 1) throw ConfigError("build_pyramid: n_levels must be >= 1");
    if (static_cast<int>(config.factors.size()) != config.n_levels - 1)
        throw ConfigError("build_pyramid: expected " + std::to_string(config.n_levels - 1) +
                          " factors for " + std::to_string(config.n_levels) + " levels, got " +
                          std::to_string(config.factors.size()));

    Pyramid pyr;
    pyr.factors = config.factors;
    pyr.levels.reserve(static_cast<std::size_t>(config.n_levels));
    pyr.levels.push_back(image);  // finest level stays unblurred
    for (int k = 1; k < config.n_levels; ++k)
        pyr.levels.push_back(gaussian_downsample(pyr.levels.back(),
                                                 config.factors[static_cast<std::size_t>(k - 1)],
                                                 config.blur_sigma_scale));

    for (std::size_t k = 0; k < pyr.levels.size() && k < min_level_sizes.size(); ++k) {
        const GrayImage& lvl = pyr.levels[k];
        if (lvl.width < min_level_sizes[k] || lvl.height < min_level_sizes[k])
            throw GeometryError("build_pyramid: level " + std::to_string(k) + " is " +
                                std::to_string(lvl.width) + "x" + std::to_string(lvl.height) +
                                ", below the required minimum of " +
                                std::to_string(min_level_sizes[k]) + " px");
    }
    return pyr;
}

std::vector<std::string> validate_pyramid_config(const PyramidConfig& config, int width,
                                                 int height) {
    std::vector<std::string> warnings;
    if (config.n_levels < 4)
        warnings.push_back("pyramid depth " + std::to_string(config.n_levels) +
                           " is below the recommended minimum of 4 levels for robust alignment");
    int w = width;
    int h = height;
    for (int f : config.factors) {
        w = ceil_div(w, f);
        h = ceil_div(h, f);
    }
    if (16L * w < width || 16L * h < height)
        warnings.push_back("coarsest pyramid level " + std::to_string(w) + "x" +
                           std::to_string(h) +
                           " is smaller than 1/16 of the input per axis; keep the coarsest level "
                           "at or above 1/16 scale for robust alignment");
    return warnings;
}

}  // namespace burst
