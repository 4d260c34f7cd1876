#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "burst/raw.hpp"

namespace burst {

/// Capture timing: N frames of frame_time each inside a burst_duration
/// window, with an inter_burst_gap before the next burst starts.
struct CaptureSchedule {
    int n_frames = 1;
    double frame_time_ms = 1.0;
    double burst_duration_ms = 1.0;
    double inter_burst_gap_ms = 1.0;
    double exposure_ms = 1.0;
    double gain_db = 0.0;
};

void validate(const CaptureSchedule& s);

struct Burst {
    std::vector<GrayImage> frames;
    std::size_t reference_index = 0;
    CaptureSchedule schedule;
};

struct RawBurst {
    std::vector<RawFrame> frames;
    std::size_t reference_index = 0;
    CaptureSchedule schedule;
};

/// Plain-text key=value manifest describing one burst directory.
struct BurstManifest {
    RawMeta meta;
    CaptureSchedule schedule;
    std::string reference_policy = "center";
};

BurstManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const BurstManifest& m, const std::filesystem::path& path);

std::size_t resolve_reference_index(const std::string& policy, std::size_t n_frames);
std::string frame_file_name(std::size_t index);

/// Load a burst directory: manifest.txt plus frame_000.raw ... in order.
RawBurst load_burst(const std::filesystem::path& dir);
void save_burst(const RawBurst& burst, const std::filesystem::path& dir,
                const std::string& reference_policy = "center");

/// Convert to the working grayscale representation: Bayer frames become
/// half-resolution quad averages, mosaic-free frames are normalized as-is.
Burst to_gray_burst(const RawBurst& raw);

}  // namespace burst
