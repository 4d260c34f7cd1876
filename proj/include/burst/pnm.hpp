#pragma once

#include <filesystem>

#include "burst/image.hpp"

namespace burst {

/// Write a binary portable graymap (P5) with maxval 2^bit_depth - 1.
/// Values are rounded half up and clamped; 16-bit samples are big-endian
/// per the format.
void save_gray(const GrayImage& img, const std::filesystem::path& path, int bit_depth = 16);

GrayImage load_gray(const std::filesystem::path& path);

}  // namespace burst
