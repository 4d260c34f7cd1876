#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "burst/image.hpp"

namespace burst {

enum class BayerPattern { RGGB, BGGR, GRBG, GBRG, None };

BayerPattern bayer_pattern_from_string(const std::string& s);
std::string to_string(BayerPattern p);

/// Sidecar metadata required to interpret a flat raw frame file.
struct RawMeta {
    int width = 0;
    int height = 0;
    int bit_depth = 16;  // <= 16
    BayerPattern pattern = BayerPattern::None;
    int black_level = 0;
};

/// Calibrated sensor data: row-major unsigned counts, little-endian 16-bit
/// on disk regardless of bit depth.
struct RawFrame {
    int width = 0;
    int height = 0;
    int bit_depth = 16;
    BayerPattern pattern = BayerPattern::None;
    int black_level = 0;
    std::vector<std::uint16_t> pixels;

    std::uint16_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    int max_value() const { return (1 << bit_depth) - 1; }
};

/// Average of dark captures at matching settings; kept as reals so the
/// average is not quantized before subtraction.
struct DarkFrame {
    int width = 0;
    int height = 0;
    std::vector<float> values;
};

RawFrame load_raw(const std::filesystem::path& path, const RawMeta& meta);
void save_raw(const RawFrame& frame, const std::filesystem::path& path);

DarkFrame average_dark_frames(const std::vector<RawFrame>& frames);

/// Per-pixel max(pixel - dark, 0); the result's black level is zero.
RawFrame subtract_dark(const RawFrame& frame, const DarkFrame& dark);

/// Average each 2x2 Bayer quad into one normalized pixel; output is half
/// resolution per axis. This is the single-channel source for alignment.
GrayImage bayer_to_gray(const RawFrame& frame);

/// Four half-resolution planes in pattern site order (even/even, odd/even,
/// even/odd, odd/odd), normalized to [0,1]. Recombination is lossless.
std::array<GrayImage, 4> split_bayer_planes(const RawFrame& frame);
RawFrame recombine_bayer_planes(const std::array<GrayImage, 4>& planes, BayerPattern pattern,
                                int bit_depth, int black_level = 0);

/// Full-resolution normalization for frames without a Bayer mosaic.
GrayImage raw_to_gray_full(const RawFrame& frame);

/// Quantize a normalized image back to raw counts (used by the synthetic
/// dataset writer).
RawFrame gray_to_raw(const GrayImage& img, int bit_depth);

}  // namespace burst
