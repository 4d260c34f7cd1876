#pragma once

#include <complex>
#include <span>
#include <vector>

#include "burst/error.hpp"

namespace burst {

/// Unitary 2D DFT of a square power-of-two tile. With this normalization a
/// constant tile c has DC coefficient c*size, Parseval holds exactly, and
/// white pixel noise of variance s^2 keeps per-coefficient variance s^2.
struct SpectralTile {
    int size = 0;
    std::vector<std::complex<double>> coeffs;  // row-major, coeffs[fy*size + fx]

    std::complex<double>& at(int fx, int fy) {
        return coeffs[static_cast<std::size_t>(fy) * size + fx];
    }
    const std::complex<double>& at(int fx, int fy) const {
        return coeffs[static_cast<std::size_t>(fy) * size + fx];
    }
};

SpectralTile dft2(std::span<const double> pixels, int size);
std::vector<double> idft2(const SpectralTile& tile);

}  // namespace burst
