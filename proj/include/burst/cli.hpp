#pragma once

#include <optional>
#include <string>
#include <vector>

#include "burst/align.hpp"
#include "burst/bench.hpp"
#include "burst/filters.hpp"
#include "burst/merge.hpp"
#include "burst/pyramid.hpp"

namespace burst::cli {

// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

struct PipelineConfig {
    PyramidConfig pyramid;
    AlignConfig align = AlignConfig::defaults();
    MergeConfig merge;
};

/// Soft recommendation checks (pyramid depth, coarsest-level scale); hard
/// limits like the 32 px search radius are enforced by the modules
/// themselves.
std::vector<std::string> validate_pipeline_config(const PipelineConfig& config, int width,
                                                  int height);

struct MergeOptions {
    std::string burst_dir;
    std::string output = "merged.pgm";
    int out_bit_depth = 16;
    PipelineConfig pipeline;
    std::optional<std::string> dark_burst_dir;
    std::string post = "none";  // none | wiener | bilateral
    WienerConfig wiener;
    BilateralConfig bilateral;
    std::optional<std::string> stats_csv;
    std::optional<std::string> bayer_out_dir;  // merge raw planes as well
};

int cmd_merge(const MergeOptions& options);

struct BenchOptions {
    std::string out_dir = ".";
    SweepSpec sweep;
};

int cmd_bench(const BenchOptions& options);

struct EvalTrajOptions {
    std::string est_path;
    std::string gt_path;
    bool scale_only = false;  // skip the rigid alignment after scale fixing
    std::optional<std::string> csv_path;
};

int cmd_eval_traj(const EvalTrajOptions& options);

struct MetricsOptions {
    std::string counts_csv;  // columns: [name,]keypoints,putative,inliers
    std::optional<std::string> out_csv;
};

int cmd_metrics(const MetricsOptions& options);

struct SynthOptions {
    std::string out_dir;
    std::uint64_t seed = 7;
    int n_frames = 7;
    double noise_sigma = 0.03;
    double max_shift = 6.0;
    int size = 512;
    int n_disks = 25;
    double contrast = 0.1;
    double background = 0.5;
    int bit_depth = 16;
};

int cmd_synth(const SynthOptions& options);

struct AlignDebugOptions {
    std::string burst_dir;
    std::string out_dir = ".";
    PipelineConfig pipeline;
};

int cmd_align_debug(const AlignDebugOptions& options);

}  // namespace burst::cli
