#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "burst/burst_io.hpp"
#include "burst/image.hpp"
#include "burst/pyramid.hpp"

namespace burst {

enum class DistanceNorm { L1, L2 };

/// Half-overlapped square tile grid over an image; the last tile per axis is
/// clamped to the border so the grid always covers the full frame.
struct TileGrid {
    int image_width = 0;
    int image_height = 0;
    int tile_size = 0;
    int stride = 0;
    int n_tiles_x = 0;
    int n_tiles_y = 0;

    static TileGrid for_image(int width, int height, int tile_size);

    int origin_x(int i) const { return std::min(i * stride, image_width - tile_size); }
    int origin_y(int j) const { return std::min(j * stride, image_height - tile_size); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * n_tiles_x + i;
    }
    std::size_t tile_count() const {
        return static_cast<std::size_t>(n_tiles_x) * n_tiles_y;
    }
};

struct Displacement {
    int dx = 0;
    int dy = 0;
    bool operator==(const Displacement&) const = default;
};

/// Per-tile integer displacements of one alternate frame relative to the
/// reference, in pixels at the grid's pyramid level.
struct DisplacementField {
    TileGrid grid;
    std::vector<Displacement> d;
    std::vector<double> residual;
    std::vector<std::uint8_t> reliable;
};

struct AlignLevel {
    int tile_size = 16;
    int search_radius = 4;
    DistanceNorm norm = DistanceNorm::L2;
};

/// Per-level parameters, finest level first (matching pyramid order).
struct AlignConfig {
    std::vector<AlignLevel> levels;
    double unreliable_residual_factor = 8.0;

    static AlignConfig defaults();
};

void validate(const AlignConfig& config);

struct TileMatch {
    Displacement d;
    double residual = 0.0;
};

/// Sum of absolute (L1) or squared (L2) pixel differences between the ref
/// tile at (rx, ry) and the alt tile at (ax, ay); alt reads are edge-clamped.
double tile_distance(const GrayImage& ref, int rx, int ry, const GrayImage& alt, int ax, int ay,
                     int tile_size, DistanceNorm norm);

/// Exhaustive search over the (2r+1)^2 integer displacements around init.
/// Ties break toward the smaller displacement magnitude, then row-major
/// candidate order.
TileMatch align_tile(const GrayImage& ref, int rx, int ry, int tile_size, const GrayImage& alt,
                     Displacement init, int search_radius, DistanceNorm norm);

/// Seed a fine grid from a coarse field: each fine tile tries the nearest,
/// horizontally adjacent and vertically adjacent coarse displacements scaled
/// by the pyramid factor and keeps whichever scores best on the fine tile.
DisplacementField upsample_displacements(const DisplacementField& coarse, int factor,
                                         const TileGrid& fine_grid, const GrayImage& ref_level,
                                         const GrayImage& alt_level, DistanceNorm norm);

/// Coarse-to-fine alignment of one alternate pyramid against the reference
/// pyramid; returns the finest-level field with reliability flags.
DisplacementField align_frame(const Pyramid& ref, const Pyramid& alt, const AlignConfig& config);

DisplacementField zero_field(int width, int height, int tile_size);

/// One field per frame; the reference maps to the zero field.
std::vector<DisplacementField> align_burst(const Burst& burst, const AlignConfig& config,
                                           const PyramidConfig& pyramid_config);

void write_field_csv(const DisplacementField& field, const std::filesystem::path& path);

}  // namespace burst
