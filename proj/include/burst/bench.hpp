#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "burst/detect.hpp"
#include "burst/synth.hpp"

namespace burst {

/// One-to-one detection scoring against true disk centers.
struct DetectionEval {
    int tp_count = 0;
    double tp_rate = 0.0;
    int fp_count = 0;
    std::vector<double> localization_errors;  // matched distances, px
};

/// Greedy nearest assignment within tolerance; each disk may be claimed by
/// at most one keypoint, unmatched keypoints count as false positives.
DetectionEval match_detections(const std::vector<Keypoint>& keypoints,
                               const std::vector<Disk>& disks, double tolerance_px = 3.0);
DetectionEval match_detections(const std::vector<Keypoint>& keypoints,
                               const SyntheticScene& scene, double tolerance_px = 3.0);

inline const char* kConditionConventional = "conventional";
inline const char* kConditionBurstNoMerge = "burst-without-merge";
inline const char* kConditionBurstMerge = "burst-with-merge";

struct SweepSpec {
    std::uint64_t scene_seed = 7;
    std::uint64_t trial_seed = 1;
    int n_seeds = 10;
    std::vector<double> sigmas = {0.01, 0.03, 0.05, 0.07, 0.1};
    std::vector<double> thresholds = {0.006, 0.01, 0.015};
    double tolerance_px = 3.0;
    bool sigma_is_variance = false;  // interpret the sigma list as variances
    int n_frames = 7;
    double max_shift = 6.0;  // per-frame, so pairwise apparent motion <= 12
    double merge_c = 8.0;
    std::vector<std::string> conditions = {kConditionConventional, kConditionBurstNoMerge,
                                           kConditionBurstMerge};
};

struct SweepRow {
    double sigma = 0.0;
    double threshold = 0.0;
    std::string condition;
    double tp_rate = 0.0;
    double fp_count = 0.0;
    double loc_err_mean = 0.0;
};

/// For every (sigma, threshold, seed) evaluate the requested conditions:
/// the noisy reference frame alone, all frames' detections pooled (each
/// frame scored against its own shifted geometry), and detection on the
/// aligned-and-merged image. Rows hold per-condition means over seeds.
std::vector<SweepRow> run_pipeline_comparison(const SweepSpec& spec);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

struct FeatureMetrics {
    double match_ratio = 0.0;     // putative / keypoints
    double precision = 0.0;       // inliers / putative
    double matching_score = 0.0;  // inliers / keypoints (= ratio * precision)
    bool keypoints_zero = false;
    bool putative_zero = false;
};

FeatureMetrics sfm_feature_metrics(long long keypoints, long long putative, long long inliers);

}  // namespace burst
