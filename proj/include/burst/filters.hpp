#pragma once

#include <optional>

#include "burst/image.hpp"

namespace burst {

/// Noise-shaping Wiener shrinkage in the tile DFT domain. Per coefficient
/// the gain is |T|^2 / (|T|^2 + k * f(w) * sigma2 * size^2) with the ramp
/// f(w) = (1 + |w|/w_max)^p, so high spatial frequencies are suppressed more
/// aggressively; DC always passes with gain 1.
struct WienerConfig {
    int tile_size = 16;
    double shaping_exponent = 1.0;         // p
    double strength = 1.0;                 // k; 0 is the identity
    std::optional<double> noise_variance;  // pixel-domain sigma^2; empty = estimate
};

GrayImage wiener_shape(const GrayImage& image, const WienerConfig& config);

/// Edge-preserving bilateral filter, w = exp(-dist^2/2*ss^2) *
/// exp(-dI^2/2*sr^2), edge-clamped borders.
struct BilateralConfig {
    int radius = 5;
    double sigma_spatial = 3.0;
    std::optional<double> sigma_range;  // empty = 2 * estimated noise sigma
};

GrayImage bilateral(const GrayImage& image, const BilateralConfig& config);

}  // namespace burst
