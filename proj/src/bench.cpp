#include "burst/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "burst/merge.hpp"
#include "burst/rng.hpp"

namespace burst {

namespace {

struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (keypoint, disk)
    std::vector<double> distances;
};

// Greedy one-to-one nearest assignment within tolerance.
Assignment greedy_assign(const std::vector<Keypoint>& keypoints, const std::vector<Disk>& disks,
                         double tolerance_px) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t ki = 0; ki < keypoints.size(); ++ki) {
        for (std::size_t di = 0; di < disks.size(); ++di) {
            const double dx = keypoints[ki].x - disks[di].cx;
            const double dy = keypoints[ki].y - disks[di].cy;
            const double dist = std::sqrt(dx * dx + dy * dy);
            if (dist <= tolerance_px) pairs.emplace_back(dist, ki, di);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    Assignment out;
    std::vector<char> kp_used(keypoints.size(), 0);
    std::vector<char> disk_used(disks.size(), 0);
    for (const auto& [dist, ki, di] : pairs) {
        if (kp_used[ki] || disk_used[di]) continue;
        kp_used[ki] = 1;
        disk_used[di] = 1;
        out.matches.emplace_back(ki, di);
        out.distances.push_back(dist);
    }
    return out;
}

struct ConditionAccumulator {
    double tp_rate_sum = 0.0;
    double fp_sum = 0.0;
    double loc_err_sum = 0.0;
    std::size_t loc_err_count = 0;
    int trials = 0;

    void add(double tp_rate, int fp, const std::vector<double>& errors) {
        tp_rate_sum += tp_rate;
        fp_sum += fp;
        for (double e : errors) loc_err_sum += e;
        loc_err_count += errors.size();
        ++trials;
    }
};

std::vector<Keypoint> filter_by_threshold(const std::vector<Keypoint>& kps, double threshold) {
    std::vector<Keypoint> out;
    for (const Keypoint& k : kps)
        if (k.response >= threshold) out.push_back(k);
    return out;
}

std::vector<Disk> shifted_disks(const SyntheticScene& scene, double tx, double ty) {
    std::vector<Disk> disks = scene.disks;
    for (Disk& d : disks) {
        d.cx += tx;
        d.cy += ty;
    }
    return disks;
}

struct PooledEval {
    double tp_rate = 0.0;
    int fp_count = 0;
    std::vector<double> localization_errors;
};

// Burst-without-merge scoring: every frame's detections are evaluated
// jointly -- each against its own shifted geometry. A disk counts as found
// if any frame finds it; false positives accumulate over all frames.
PooledEval pooled_eval(const std::vector<std::vector<Keypoint>>& per_frame,
                       const SyntheticScene& scene,
                       const std::vector<std::array<double, 2>>& translations,
                       double tolerance_px) {
    PooledEval out;
    std::set<std::size_t> found;
    for (std::size_t z = 0; z < per_frame.size(); ++z) {
        const std::vector<Disk> disks =
            shifted_disks(scene, translations[z][0], translations[z][1]);
        const Assignment a = greedy_assign(per_frame[z], disks, tolerance_px);
        out.fp_count += static_cast<int>(per_frame[z].size() - a.matches.size());
        out.localization_errors.insert(out.localization_errors.end(), a.distances.begin(),
                                       a.distances.end());
        for (const auto& [ki, di] : a.matches) found.insert(di);
    }
    out.tp_rate = scene.disks.empty()
                      ? 0.0
                      : static_cast<double>(found.size()) / static_cast<double>(scene.disks.size());
    return out;
}

}  // namespace

DetectionEval match_detections(const std::vector<Keypoint>& keypoints,
                               const std::vector<Disk>& disks, double tolerance_px) {
    if (tolerance_px <= 0) throw ConfigError("match_detections: tolerance must be positive");
    const Assignment a = greedy_assign(keypoints, disks, tolerance_px);
    DetectionEval eval;
    eval.tp_count = static_cast<int>(a.matches.size());
    eval.fp_count = static_cast<int>(keypoints.size()) - eval.tp_count;
    eval.tp_rate = disks.empty() ? 0.0
                                 : static_cast<double>(eval.tp_count) /
                                       static_cast<double>(disks.size());
    eval.localization_errors = a.distances;
    return eval;
}

DetectionEval match_detections(const std::vector<Keypoint>& keypoints,
                               const SyntheticScene& scene, double tolerance_px) {
    return match_detections(keypoints, scene.disks, tolerance_px);
}

std::vector<SweepRow> run_pipeline_comparison(const SweepSpec& spec) {
    if (spec.sigmas.empty() || spec.thresholds.empty())
        throw ConfigError("run_pipeline_comparison: empty sweep");
    if (spec.n_seeds < 1) throw ConfigError("run_pipeline_comparison: n_seeds must be >= 1");

    const SyntheticScene scene = make_disk_scene(spec.scene_seed);
    const double thr_min = *std::min_element(spec.thresholds.begin(), spec.thresholds.end());

    const bool want_conventional =
        std::count(spec.conditions.begin(), spec.conditions.end(), kConditionConventional) > 0;
    const bool want_pooled =
        std::count(spec.conditions.begin(), spec.conditions.end(), kConditionBurstNoMerge) > 0;
    const bool want_merged =
        std::count(spec.conditions.begin(), spec.conditions.end(), kConditionBurstMerge) > 0;

    // keyed by (sigma index, threshold index, condition)
    std::map<std::tuple<std::size_t, std::size_t, std::string>, ConditionAccumulator> table;

    for (std::size_t si = 0; si < spec.sigmas.size(); ++si) {
        const double sigma =
            spec.sigma_is_variance ? std::sqrt(spec.sigmas[si]) : spec.sigmas[si];
        for (int seed = 0; seed < spec.n_seeds; ++seed) {
            const std::uint64_t trial =
                derive_seed(spec.trial_seed, (static_cast<std::uint64_t>(si) << 32) |
                                                 static_cast<std::uint64_t>(seed));
            const BurstSpec bspec =
                random_burst_spec(spec.n_frames, spec.max_shift, sigma, derive_seed(trial, 1));
            const SynthBurst sb = synth_burst(scene, bspec, derive_seed(trial, 2));
            const std::size_t ref = sb.burst.reference_index;

            std::vector<Keypoint> det_conv;
            if (want_conventional || want_pooled)
                det_conv = detect_blobs(sb.burst.frames[ref], thr_min);

            std::vector<std::vector<Keypoint>> det_frames;
            if (want_pooled) {
                det_frames.resize(sb.burst.frames.size());
                for (std::size_t z = 0; z < sb.burst.frames.size(); ++z)
                    det_frames[z] =
                        z == ref ? det_conv : detect_blobs(sb.burst.frames[z], thr_min);
            }

            std::vector<Keypoint> det_merged;
            if (want_merged) {
                const std::vector<DisplacementField> fields =
                    align_burst(sb.burst, AlignConfig::defaults(), PyramidConfig{});
                MergeConfig mc;
                mc.c = spec.merge_c;
                const MergeResult merged = merge_burst(sb.burst, fields, mc);
                det_merged = detect_blobs(merged.image, thr_min);
            }

            for (std::size_t ti = 0; ti < spec.thresholds.size(); ++ti) {
                const double thr = spec.thresholds[ti];
                if (want_conventional) {
                    const DetectionEval ev = match_detections(
                        filter_by_threshold(det_conv, thr), scene.disks, spec.tolerance_px);
                    table[{si, ti, kConditionConventional}].add(ev.tp_rate, ev.fp_count,
                                                                ev.localization_errors);
                }
                if (want_pooled) {
                    std::vector<std::vector<Keypoint>> filtered(det_frames.size());
                    for (std::size_t z = 0; z < det_frames.size(); ++z)
                        filtered[z] = filter_by_threshold(det_frames[z], thr);
                    const PooledEval ev =
                        pooled_eval(filtered, scene, sb.translations, spec.tolerance_px);
                    table[{si, ti, kConditionBurstNoMerge}].add(ev.tp_rate, ev.fp_count,
                                                                ev.localization_errors);
                }
                if (want_merged) {
                    const DetectionEval ev = match_detections(
                        filter_by_threshold(det_merged, thr), scene.disks, spec.tolerance_px);
                    table[{si, ti, kConditionBurstMerge}].add(ev.tp_rate, ev.fp_count,
                                                              ev.localization_errors);
                }
            }
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t si = 0; si < spec.sigmas.size(); ++si) {
        for (std::size_t ti = 0; ti < spec.thresholds.size(); ++ti) {
            for (const std::string& cond : spec.conditions) {
                auto it = table.find({si, ti, cond});
                if (it == table.end()) continue;
                const ConditionAccumulator& a = it->second;
                SweepRow row;
                row.sigma = spec.sigmas[si];
                row.threshold = spec.thresholds[ti];
                row.condition = cond;
                row.tp_rate = a.tp_rate_sum / a.trials;
                row.fp_count = a.fp_sum / a.trials;
                row.loc_err_mean =
                    a.loc_err_count > 0 ? a.loc_err_sum / static_cast<double>(a.loc_err_count)
                                        : 0.0;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_sweep_csv: cannot open '" + path.string() + "'");
    out << "sigma,threshold,condition,tp_rate,fp_count,loc_err_mean\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%g,%g,%s,%.6f,%.6f,%.6f\n", r.sigma, r.threshold,
                      r.condition.c_str(), r.tp_rate, r.fp_count, r.loc_err_mean);
        out << buf;
    }
    if (!out) throw IoError("write_sweep_csv: write failed for '" + path.string() + "'");
}

FeatureMetrics sfm_feature_metrics(long long keypoints, long long putative, long long inliers) {
    if (keypoints < 0 || putative < 0 || inliers < 0)
        throw ConfigError("sfm_feature_metrics: counts must be >= 0");
    if (inliers > putative)
        throw ConfigError("sfm_feature_metrics: inliers " + std::to_string(inliers) +
                          " exceed putative matches " + std::to_string(putative));
    FeatureMetrics m;
    m.keypoints_zero = keypoints == 0;
    m.putative_zero = putative == 0;
    m.match_ratio = keypoints > 0 ? static_cast<double>(putative) / keypoints : 0.0;
    m.precision = putative > 0 ? static_cast<double>(inliers) / putative : 0.0;
    // The product form keeps matching_score = match_ratio * precision an
    // exact identity; mathematically it equals inliers / keypoints.
    m.matching_score = m.match_ratio * m.precision;
    return m;
}

}  // namespace burst
