#include "burst/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "burst/pnm.hpp"
#include "burst/rng.hpp"
#include "burst/traj.hpp"

namespace burst::cli {

namespace {

namespace fs = std::filesystem;

// Tag module errors with the pipeline stage that raised them, preserving
// the error category for exit-code mapping.
template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const IoError& e) {
        throw IoError("stage " + std::string(name) + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + std::string(name) + ": " + e.what());
    } catch (const GeometryError& e) {
        throw GeometryError("stage " + std::string(name) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("stage " + std::string(name) + ": " + e.what());
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

std::vector<std::string> validate_pipeline_config(const PipelineConfig& config, int width,
                                                  int height) {
    return validate_pyramid_config(config.pyramid, width, height);
}

int cmd_merge(const MergeOptions& options) {
    RawBurst raw = stage("load", [&] { return load_burst(options.burst_dir); });

    if (options.dark_burst_dir) {
        stage("dark", [&] {
            const RawBurst darks = load_burst(*options.dark_burst_dir);
            const DarkFrame dark = average_dark_frames(darks.frames);
            for (RawFrame& f : raw.frames) f = subtract_dark(f, dark);
            return 0;
        });
    }

    const Burst burst = stage("convert", [&] { return to_gray_burst(raw); });
    print_warnings(validate_pipeline_config(options.pipeline, burst.frames[0].width,
                                            burst.frames[0].height));

    const std::vector<DisplacementField> fields = stage("align", [&] {
        return align_burst(burst, options.pipeline.align, options.pipeline.pyramid);
    });

    const MergeResult merged =
        stage("merge", [&] { return merge_burst(burst, fields, options.pipeline.merge); });

    GrayImage output = merged.image;
    if (options.post == "wiener") {
        output = stage("post", [&] { return wiener_shape(output, options.wiener); });
    } else if (options.post == "bilateral") {
        output = stage("post", [&] { return bilateral(output, options.bilateral); });
    } else if (options.post != "none") {
        throw ConfigError("stage post: unknown filter '" + options.post + "'");
    }

    stage("save", [&] {
        save_gray(output, options.output, options.out_bit_depth);
        if (options.stats_csv) write_merge_stats_csv(merged.stats, *options.stats_csv);
        return 0;
    });

    if (options.bayer_out_dir) {
        stage("bayer-merge", [&] {
            if (raw.frames[0].pattern == BayerPattern::None)
                throw ConfigError("--bayer-out requires a Bayer burst");
            const std::array<GrayImage, 4> planes =
                merge_bayer_burst(raw, fields, options.pipeline.merge);
            fs::create_directories(*options.bayer_out_dir);
            for (int p = 0; p < 4; ++p)
                save_gray(planes[static_cast<std::size_t>(p)],
                          fs::path(*options.bayer_out_dir) /
                              ("plane_" + std::to_string(p) + ".pgm"),
                          16);
            const RawFrame recombined =
                recombine_bayer_planes(planes, raw.frames[0].pattern, raw.frames[0].bit_depth);
            save_raw(recombined, fs::path(*options.bayer_out_dir) / "merged_bayer.raw");
            return 0;
        });
    }

    std::cout << "merged " << burst.frames.size() << " frames -> " << options.output << "\n";
    return kExitOk;
}

int cmd_bench(const BenchOptions& options) {
    fs::create_directories(options.out_dir);
    const std::vector<SweepRow> rows = run_pipeline_comparison(options.sweep);
    const fs::path csv = fs::path(options.out_dir) / "noise_sweep.csv";
    write_sweep_csv(rows, csv);
    std::cout << "wrote " << rows.size() << " rows -> " << csv.string() << "\n";
    return kExitOk;
}

int cmd_eval_traj(const EvalTrajOptions& options) {
    const traj::Trajectory est = traj::load_trajectory(options.est_path);
    const traj::Trajectory gt = traj::load_trajectory(options.gt_path);

    const std::size_t skipped = gt.poses.size() - traj::common_ids(est, gt).size();
    const traj::ScaleResult scaled = traj::fix_scale_first_pair(est, gt);
    traj::Trajectory aligned = scaled.trajectory;
    if (!options.scale_only) {
        const traj::RigidAlignResult rigid = traj::align_rigid(scaled.trajectory, gt);
        if (rigid.degenerate)
            std::cerr << "warning: nearly collinear positions, rigid alignment is best-effort\n";
        aligned = rigid.trajectory;
    }

    const traj::PoseErrors ate = traj::absolute_instantaneous_error(aligned, gt);
    const traj::PoseErrors rpe = traj::relative_pose_error(aligned, gt);

    std::printf("registered poses: %zu/%zu (skipped %zu)\n", est.poses.size(),
                gt.poses.size(), skipped);
    std::printf("scale (first registered pair): %.9g\n", scaled.scale);
    std::printf("ATE  trans mean: %.6f cm   rot mean: %.6f deg\n", ate.trans_mean,
                ate.rot_mean_deg);
    std::printf("RPE  trans mean: %.6f cm   rot mean: %.6f deg\n", rpe.trans_mean,
                rpe.rot_mean_deg);

    if (options.csv_path) {
        std::ofstream out(*options.csv_path);
        if (!out) throw IoError("cmd_eval_traj: cannot open '" + *options.csv_path + "'");
        out << "kind,id,trans,rot_deg\n";
        char buf[128];
        for (std::size_t i = 0; i < ate.ids.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "ate,%lld,%.9g,%.9g\n", ate.ids[i], ate.trans[i],
                          ate.rot_deg[i]);
            out << buf;
        }
        for (std::size_t i = 0; i < rpe.ids.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "rpe,%lld,%.9g,%.9g\n", rpe.ids[i], rpe.trans[i],
                          rpe.rot_deg[i]);
            out << buf;
        }
    }
    return kExitOk;
}

int cmd_metrics(const MetricsOptions& options) {
    std::ifstream in(options.counts_csv);
    if (!in) throw IoError("cmd_metrics: cannot open '" + options.counts_csv + "'");

    std::string header;
    if (!std::getline(in, header)) throw IoError("cmd_metrics: empty CSV");
    const std::vector<std::string> cols = split_csv_line(header);
    int name_col = -1;
    int kp_col = -1;
    int put_col = -1;
    int inl_col = -1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "name") name_col = static_cast<int>(i);
        if (cols[i] == "keypoints") kp_col = static_cast<int>(i);
        if (cols[i] == "putative") put_col = static_cast<int>(i);
        if (cols[i] == "inliers") inl_col = static_cast<int>(i);
    }
    if (kp_col < 0 || put_col < 0 || inl_col < 0)
        throw ConfigError("cmd_metrics: CSV must have keypoints,putative,inliers columns");

    std::ostringstream result;
    result << "name,match_ratio,precision,matching_score\n";
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::size_t needed =
            static_cast<std::size_t>(std::max({kp_col, put_col, inl_col})) + 1;
        if (fields.size() < needed)
            throw ConfigError("cmd_metrics: row " + std::to_string(row) + " is short");
        long long kp, put, inl;
        try {
            kp = std::stoll(fields[static_cast<std::size_t>(kp_col)]);
            put = std::stoll(fields[static_cast<std::size_t>(put_col)]);
            inl = std::stoll(fields[static_cast<std::size_t>(inl_col)]);
        } catch (const std::logic_error&) {
            throw ConfigError("cmd_metrics: row " + std::to_string(row) +
                              " has non-integer counts");
        }
        const FeatureMetrics m = sfm_feature_metrics(kp, put, inl);
        const std::string name = name_col >= 0 && static_cast<std::size_t>(name_col) < fields.size()
                                     ? fields[static_cast<std::size_t>(name_col)]
                                     : "row" + std::to_string(row);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g%s%s\n", name.c_str(), m.match_ratio,
                      m.precision, m.matching_score,
                      m.keypoints_zero ? ",keypoints_zero" : "",
                      m.putative_zero ? ",putative_zero" : "");
        result << buf;
    }

    std::cout << result.str();
    if (options.out_csv) {
        std::ofstream out(*options.out_csv);
        if (!out) throw IoError("cmd_metrics: cannot open '" + *options.out_csv + "'");
        out << result.str();
    }
    return kExitOk;
}

int cmd_synth(const SynthOptions& options) {
    const SyntheticScene scene = make_disk_scene(options.seed, options.n_disks, options.size, 4.0,
                                                 24.0, options.contrast, options.background);
    const BurstSpec spec = random_burst_spec(options.n_frames, options.max_shift,
                                             options.noise_sigma, derive_seed(options.seed, 11));
    const SynthBurst sb = synth_burst(scene, spec, derive_seed(options.seed, 12));

    RawBurst raw;
    raw.reference_index = sb.burst.reference_index;
    raw.schedule = sb.burst.schedule;
    for (const GrayImage& f : sb.burst.frames)
        raw.frames.push_back(gray_to_raw(f, options.bit_depth));
    save_burst(raw, options.out_dir);

    save_gray(sb.clean_reference, fs::path(options.out_dir) / "clean_reference.pgm", 16);

    std::ofstream shifts(fs::path(options.out_dir) / "shifts.csv");
    if (!shifts) throw IoError("cmd_synth: cannot write shifts.csv");
    shifts << "frame,tx,ty\n";
    for (std::size_t z = 0; z < sb.translations.size(); ++z)
        shifts << z << "," << sb.translations[z][0] << "," << sb.translations[z][1] << "\n";

    std::cout << "wrote " << sb.burst.frames.size() << "-frame burst -> " << options.out_dir
              << "\n";
    return kExitOk;
}

int cmd_align_debug(const AlignDebugOptions& options) {
    const RawBurst raw = stage("load", [&] { return load_burst(options.burst_dir); });
    const Burst burst = stage("convert", [&] { return to_gray_burst(raw); });
    const std::vector<DisplacementField> fields = stage("align", [&] {
        return align_burst(burst, options.pipeline.align, options.pipeline.pyramid);
    });
    fs::create_directories(options.out_dir);
    for (std::size_t z = 0; z < fields.size(); ++z) {
        char name[64];
        std::snprintf(name, sizeof(name), "field_%03zu.csv", z);
        write_field_csv(fields[z], fs::path(options.out_dir) / name);
    }
    std::cout << "wrote " << fields.size() << " displacement fields -> " << options.out_dir
              << "\n";
    return kExitOk;
}

}  // namespace burst::cli
