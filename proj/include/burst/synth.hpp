#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "burst/burst_io.hpp"
#include "burst/image.hpp"

namespace burst {

struct Disk {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

/// Disk test chart: constant background plus non-overlapping disks of a
/// fixed contrast at varying scales.
struct SyntheticScene {
    int width = 512;
    int height = 512;
    std::vector<Disk> disks;
    double contrast = 0.1;
    double background = 0.5;
};

/// Seeded placement of n log-spaced radii in [r_min, r_max]; placement keeps
/// a clearance margin between disks and from the borders.
SyntheticScene make_disk_scene(std::uint64_t seed, int n_disks = 25, int size = 512,
                               double r_min = 4.0, double r_max = 24.0, double contrast = 0.1,
                               double background = 0.5);

/// Render with 4x4 supersampled anti-aliased boundaries; disk centers are
/// subpixel. Errors if any disk overlaps another or leaves the frame.
GrayImage render_scene(const SyntheticScene& scene);
GrayImage render_shifted(const SyntheticScene& scene, double tx, double ty);

/// Per-frame translations plus i.i.d. Gaussian noise of noise_sigma.
struct BurstSpec {
    int n_frames = 7;
    std::vector<std::array<double, 2>> translations;  // one per frame, magnitude <= 12
    double noise_sigma = 0.03;
};

/// Integer translations of magnitude <= max_shift; the center (reference)
/// frame stays at zero.
BurstSpec random_burst_spec(int n_frames, double max_shift, double noise_sigma,
                            std::uint64_t seed);

struct SynthBurst {
    Burst burst;
    std::vector<std::array<double, 2>> translations;  // absolute, per frame
    GrayImage clean_reference;                        // noise-free reference frame
};

/// Frames are re-rendered at shifted disk centers (not resampled), then
/// noised and clamped to [0,1]. Deterministic for a given seed.
SynthBurst synth_burst(const SyntheticScene& scene, const BurstSpec& spec, std::uint64_t seed);

}  // namespace burst
