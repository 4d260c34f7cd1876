#include "burst/filters.hpp"

#include <cmath>
#include <vector>

#include "burst/dft.hpp"
#include "burst/merge.hpp"
#include "burst/tiles.hpp"

namespace burst {

GrayImage wiener_shape(const GrayImage& image, const WienerConfig& config) {
    if (config.tile_size < 2 || (config.tile_size & (config.tile_size - 1)) != 0)
        throw ConfigError("wiener_shape: tile_size must be a power of two >= 2");
    if (config.strength < 0) throw ConfigError("wiener_shape: strength must be >= 0");
    if (config.shaping_exponent < 0)
        throw ConfigError("wiener_shape: shaping_exponent must be >= 0");

    const double sigma2 = config.noise_variance ? *config.noise_variance
                                                : estimate_noise_variance(image);
    const int size = config.tile_size;
    const OverlapGrid grid = OverlapGrid::make(image.width, image.height, size);
    const std::vector<double> window = raised_cosine_window(size);

    // Frequency ramp, precomputed per coefficient.
    const double w_max = std::sqrt(2.0) * (size / 2.0);
    std::vector<double> noise_shape(static_cast<std::size_t>(size) * size);
    for (int fy = 0; fy < size; ++fy) {
        const int wy = std::min(fy, size - fy);
        for (int fx = 0; fx < size; ++fx) {
            const int wx = std::min(fx, size - fx);
            const double mag = std::sqrt(static_cast<double>(wx) * wx + static_cast<double>(wy) * wy);
            noise_shape[static_cast<std::size_t>(fy) * size + fx] =
                std::pow(1.0 + mag / w_max, config.shaping_exponent);
        }
    }
    const double noise_energy = config.strength * sigma2 * static_cast<double>(size) * size;

    OverlapAccumulator acc(image.width, image.height);
    std::vector<double> tile(static_cast<std::size_t>(size) * size);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const int ox = grid.origin_x(i);
            const int oy = grid.origin_y(j);
            extract_tile(image, ox, oy, size, 0, 0, tile);
            apply_window(tile, window, size);
            SpectralTile spec = dft2(tile, size);
            for (std::size_t idx = 0; idx < spec.coeffs.size(); ++idx) {
                if (idx == 0) continue;  // DC passes untouched
                const double power = std::norm(spec.coeffs[idx]);
                const double denom = power + noise_energy * noise_shape[idx];
                spec.coeffs[idx] *= denom > 0.0 ? power / denom : 1.0;
            }
            const std::vector<double> spatial = idft2(spec);
            acc.add_tile(ox, oy, size, spatial, window);
        }
    }
    return acc.normalized();
}

GrayImage bilateral(const GrayImage& image, const BilateralConfig& config) {
    if (config.radius < 0) throw ConfigError("bilateral: radius must be >= 0");
    if (config.sigma_spatial <= 0) throw ConfigError("bilateral: sigma_spatial must be positive");
    if (config.sigma_range && *config.sigma_range <= 0)
        throw ConfigError("bilateral: sigma_range must be positive");
    if (config.radius == 0) return image;

    const double sigma_range =
        config.sigma_range ? *config.sigma_range
                           : 2.0 * std::sqrt(estimate_noise_variance(image));
    const int r = config.radius;
    std::vector<double> spatial(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1));
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            spatial[static_cast<std::size_t>(dy + r) * (2 * r + 1) + (dx + r)] =
                std::exp(-0.5 * (dx * dx + dy * dy) /
                         (config.sigma_spatial * config.sigma_spatial));

    const double inv_2sr2 = 0.5 / (sigma_range * sigma_range);
    GrayImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const double center = image.at(x, y);
            double num = 0.0;
            double den = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const double v = sample_clamped(image, x + dx, y + dy);
                    const double di = v - center;
                    const double w =
                        spatial[static_cast<std::size_t>(dy + r) * (2 * r + 1) + (dx + r)] *
                        std::exp(-di * di * inv_2sr2);
                    num += w * v;
                    den += w;
                }
            }
            out.at(x, y) = static_cast<float>(num / den);
        }
    }
    return out;
}

}  // namespace burst
