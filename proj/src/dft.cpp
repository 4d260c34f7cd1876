#include "burst/dft.hpp"

#include <cmath>
#include <numbers>

namespace burst {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, unnormalized. sign = -1 forward, +1 inverse.
void fft1d(std::complex<double>* data, int n, int stride, double sign,
           const std::vector<std::complex<double>>& twiddles) {
    // bit-reversal permutation
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i * stride], data[j * stride]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len / 2;
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < half; ++k) {
                std::complex<double> w = twiddles[static_cast<std::size_t>(k * step)];
                if (sign > 0) w = std::conj(w);
                std::complex<double>& a = data[(i + k) * stride];
                std::complex<double>& b = data[(i + k + half) * stride];
                const std::complex<double> t = b * w;
                b = a - t;
                a = a + t;
            }
        }
    }
}

std::vector<std::complex<double>> make_twiddles(int n) {
    std::vector<std::complex<double>> tw(static_cast<std::size_t>(n / 2));
    for (int k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * k / n;
        tw[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
    }
    return tw;
}

void fft2d(SpectralTile& tile, double sign) {
    const int n = tile.size;
    const std::vector<std::complex<double>> tw = make_twiddles(n);
    for (int y = 0; y < n; ++y) fft1d(&tile.coeffs[static_cast<std::size_t>(y) * n], n, 1, sign, tw);
    for (int x = 0; x < n; ++x) fft1d(&tile.coeffs[static_cast<std::size_t>(x)], n, n, sign, tw);
    // unitary split: 1/size per direction
    const double scale = 1.0 / n;
    for (std::complex<double>& c : tile.coeffs) c *= scale;
}

}  // namespace

SpectralTile dft2(std::span<const double> pixels, int size) {
    if (!is_power_of_two(size))
        throw ConfigError("dft2: tile size must be a power of two, got " + std::to_string(size));
    if (pixels.size() != static_cast<std::size_t>(size) * size)
        throw GeometryError("dft2: pixel count does not match tile size");
    SpectralTile tile;
    tile.size = size;
    tile.coeffs.assign(pixels.begin(), pixels.end());
    fft2d(tile, -1.0);
    return tile;
}

std::vector<double> idft2(const SpectralTile& tile) {
    if (!is_power_of_two(tile.size))
        throw ConfigError("idft2: tile size must be a power of two");
    if (tile.coeffs.size() != static_cast<std::size_t>(tile.size) * tile.size)
        throw GeometryError("idft2: coefficient count does not match tile size");
    SpectralTile work = tile;
    fft2d(work, 1.0);
    std::vector<double> out(work.coeffs.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = work.coeffs[i].real();
    return out;
}

}  // namespace burst
