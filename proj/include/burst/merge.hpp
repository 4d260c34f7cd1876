#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

#include "burst/align.hpp"
#include "burst/burst_io.hpp"
#include "burst/dft.hpp"

namespace burst {

enum class MergeWindow { RaisedCosine };

struct MergeConfig {
    int tile_size = 16;
    double c = 8.0;  // robustness scale on the noise term; 0 keeps the reference only
    std::optional<double> noise_variance;  // pixel-domain sigma^2; empty = estimate (AUTO)
    MergeWindow window = MergeWindow::RaisedCosine;
};

void validate(const MergeConfig& config);

/// Per-frame diagnostics of the merge: mean contribution weight A_z over all
/// tiles and frequencies (0 for the reference), and the fraction of
/// difference energy that the vote rejected (returned to the reference).
struct MergeStats {
    std::vector<double> mean_contribution;
    std::vector<double> rejected_energy_fraction;
    double overall_rejected_energy_fraction = 0.0;
};

struct MergeResult {
    GrayImage image;
    MergeStats stats;
};

/// Multiply by the separable raised-cosine window (copying variant of the
/// in-place helper in tiles.hpp).
std::vector<double> window_tile(std::span<const double> tile, int size);

/// Robust pairwise temporal merge of one tile stack. alts excludes the
/// reference; the average runs over all N = alts+1 frames with the reference
/// contributing its own coefficients (its difference term vanishes).
/// Per frequency: D_z = T_R - T_z, A_z = |D_z|^2 / (|D_z|^2 + c*sigma2),
/// output = (1/N) * sum_z [T_z + A_z * (T_R - T_z)].
SpectralTile merge_tile(const SpectralTile& ref, const std::vector<SpectralTile>& alts, double c,
                        double sigma2);

/// Robust noise estimate from the finest-scale high-pass response: sigma =
/// median(|horizontal pairwise differences| / sqrt(2)) / 0.6745, returned as
/// sigma^2 with a 1e-12 floor.
double estimate_noise_variance(const GrayImage& ref);

/// Full-frame merge: half-overlapped raised-cosine tiles, per-tile 2D DFT,
/// robust vote against the reference, overlap-add reconstruction. fields
/// holds one displacement field per frame (reference field ignored).
MergeResult merge_burst(const Burst& burst, const std::vector<DisplacementField>& fields,
                        const MergeConfig& config);

/// Unaligned per-pixel mean; the long-exposure stand-in for comparisons.
GrayImage naive_average(const Burst& burst);

/// Merge each Bayer plane independently with displacement fields computed on
/// the half-resolution grayscale image (same geometry as the planes). The
/// noise variance is estimated per plane unless given explicitly.
std::array<GrayImage, 4> merge_bayer_burst(const RawBurst& burst,
                                           const std::vector<DisplacementField>& fields,
                                           const MergeConfig& config);

void write_merge_stats_csv(const MergeStats& stats, const std::filesystem::path& path);

}  // namespace burst
