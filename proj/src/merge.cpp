#include "burst/merge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "burst/tiles.hpp"

namespace burst {

namespace {

struct VoteAccumulator {
    std::vector<double> contribution_sum;  // sum of A_z per frame
    std::vector<double> rejected_energy;   // sum of A_z * |D_z|^2 per frame
    std::vector<double> diff_energy;       // sum of |D_z|^2 per frame
    std::size_t coeff_count = 0;           // per-frame count of accumulated coefficients

    explicit VoteAccumulator(std::size_t n_frames)
        : contribution_sum(n_frames, 0.0), rejected_energy(n_frames, 0.0),
          diff_energy(n_frames, 0.0) {}
};

// Single tile-stack merge with optional stats accumulation. frame_of_alt
// maps positions in alts back to burst frame indices.
SpectralTile merge_tile_impl(const SpectralTile& ref, const std::vector<SpectralTile>& alts,
                             double c, double sigma2, VoteAccumulator* votes,
                             const std::vector<std::size_t>* frame_of_alt) {
    for (const SpectralTile& t : alts)
        if (t.size != ref.size) throw GeometryError("merge_tile: tile sizes differ");
    if (c < 0) throw ConfigError("merge_tile: c must be >= 0");
    if (c > 0 && sigma2 <= 0)
        throw ConfigError("merge_tile: noise variance must be positive when c > 0");

    const double noise_term = c * sigma2;
    const std::size_t n_coeffs = ref.coeffs.size();
    const double n_frames = static_cast<double>(alts.size() + 1);

    SpectralTile out;
    out.size = ref.size;
    out.coeffs.assign(n_coeffs, {0.0, 0.0});

    // The reference's own term: T_R + A_R * 0 = T_R.
    for (std::size_t i = 0; i < n_coeffs; ++i) out.coeffs[i] = ref.coeffs[i];

    for (std::size_t z = 0; z < alts.size(); ++z) {
        const SpectralTile& alt = alts[z];
        double a_sum = 0.0;
        double rejected = 0.0;
        double diff_total = 0.0;
        for (std::size_t i = 0; i < n_coeffs; ++i) {
            const std::complex<double> diff = ref.coeffs[i] - alt.coeffs[i];
            const double d2 = std::norm(diff);
            const double denom = d2 + noise_term;
            const double a = denom > 0.0 ? d2 / denom : 0.0;
            out.coeffs[i] += alt.coeffs[i] + a * diff;
            a_sum += a;
            rejected += a * d2;
            diff_total += d2;
        }
        if (votes) {
            const std::size_t f = (*frame_of_alt)[z];
            votes->contribution_sum[f] += a_sum;
            votes->rejected_energy[f] += rejected;
            votes->diff_energy[f] += diff_total;
        }
    }
    if (votes) votes->coeff_count += n_coeffs;

    const double scale = 1.0 / n_frames;
    for (std::complex<double>& v : out.coeffs) v *= scale;
    return out;
}

// Nearest alignment tile for a merge-tile center, per the no-interpolation
// rule: integer fields stay integer.
Displacement field_lookup(const DisplacementField& field, double cx, double cy) {
    const TileGrid& g = field.grid;
    const double gx = (std::clamp(cx, 0.0, g.image_width - 1.0) - g.tile_size / 2.0) / g.stride;
    const double gy = (std::clamp(cy, 0.0, g.image_height - 1.0) - g.tile_size / 2.0) / g.stride;
    const int i = std::clamp(static_cast<int>(std::lround(gx)), 0, g.n_tiles_x - 1);
    const int j = std::clamp(static_cast<int>(std::lround(gy)), 0, g.n_tiles_y - 1);
    return field.d[g.index(i, j)];
}

MergeStats finalize_stats(const VoteAccumulator& votes, std::size_t reference_index) {
    MergeStats stats;
    const std::size_t n = votes.contribution_sum.size();
    stats.mean_contribution.assign(n, 0.0);
    stats.rejected_energy_fraction.assign(n, 0.0);
    double rejected_total = 0.0;
    double diff_total = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
        if (z != reference_index && votes.coeff_count > 0)
            stats.mean_contribution[z] =
                votes.contribution_sum[z] / static_cast<double>(votes.coeff_count);
        if (votes.diff_energy[z] > 0.0)
            stats.rejected_energy_fraction[z] = votes.rejected_energy[z] / votes.diff_energy[z];
        rejected_total += votes.rejected_energy[z];
        diff_total += votes.diff_energy[z];
    }
    stats.overall_rejected_energy_fraction = diff_total > 0.0 ? rejected_total / diff_total : 0.0;
    return stats;
}

MergeResult merge_frames(const std::vector<GrayImage>& frames, std::size_t reference_index,
                         const std::vector<DisplacementField>& fields, const MergeConfig& config,
                         double sigma2) {
    const GrayImage& ref = frames[reference_index];
    const OverlapGrid grid = OverlapGrid::make(ref.width, ref.height, config.tile_size);
    const std::vector<double> window = raised_cosine_window(config.tile_size);
    const std::size_t tile_px = static_cast<std::size_t>(config.tile_size) * config.tile_size;

    std::vector<std::size_t> alt_frames;
    for (std::size_t z = 0; z < frames.size(); ++z)
        if (z != reference_index) alt_frames.push_back(z);

    VoteAccumulator votes(frames.size());
    OverlapAccumulator acc(ref.width, ref.height);
    std::vector<double> ref_tile(tile_px);
    std::vector<double> alt_tile(tile_px);
    std::vector<SpectralTile> alt_spectra(alt_frames.size());

    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const int ox = grid.origin_x(i);
            const int oy = grid.origin_y(j);
            extract_tile(ref, ox, oy, config.tile_size, 0, 0, ref_tile);
            apply_window(ref_tile, window, config.tile_size);
            const SpectralTile ref_spec = dft2(ref_tile, config.tile_size);

            const double cx = ox + config.tile_size / 2.0;
            const double cy = oy + config.tile_size / 2.0;
            for (std::size_t a = 0; a < alt_frames.size(); ++a) {
                const std::size_t z = alt_frames[a];
                const Displacement d = field_lookup(fields[z], cx, cy);
                extract_tile(frames[z], ox, oy, config.tile_size, d.dx, d.dy, alt_tile);
                apply_window(alt_tile, window, config.tile_size);
                alt_spectra[a] = dft2(alt_tile, config.tile_size);
            }

            const SpectralTile merged =
                merge_tile_impl(ref_spec, alt_spectra, config.c, sigma2, &votes, &alt_frames);
            const std::vector<double> spatial = idft2(merged);
            acc.add_tile(ox, oy, config.tile_size, spatial, window);
        }
    }

    MergeResult result;
    result.image = clamp01(acc.normalized());
    result.stats = finalize_stats(votes, reference_index);
    return result;
}

}  // namespace

void validate(const MergeConfig& config) {
    if (config.tile_size < 2 || (config.tile_size & (config.tile_size - 1)) != 0)
        throw ConfigError("merge config: tile_size must be a power of two >= 2");
    if (config.c < 0) throw ConfigError("merge config: c must be >= 0");
    if (config.noise_variance && *config.noise_variance <= 0)
        throw ConfigError("merge config: explicit noise variance must be positive");
}

std::vector<double> window_tile(std::span<const double> tile, int size) {
    if (tile.size() != static_cast<std::size_t>(size) * size)
        throw GeometryError("window_tile: pixel count does not match tile size");
    std::vector<double> out(tile.begin(), tile.end());
    apply_window(out, raised_cosine_window(size), size);
    return out;
}

SpectralTile merge_tile(const SpectralTile& ref, const std::vector<SpectralTile>& alts, double c,
                        double sigma2) {
    return merge_tile_impl(ref, alts, c, sigma2, nullptr, nullptr);
}

double estimate_noise_variance(const GrayImage& ref) {
    if (ref.width < 32 || ref.height < 32)
        throw GeometryError("estimate_noise_variance: image must be at least 32x32");
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(ref.width - 1) * ref.height);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int y = 0; y < ref.height; ++y)
        for (int x = 0; x + 1 < ref.width; ++x)
            mags.push_back(std::abs(static_cast<double>(ref.at(x + 1, y)) - ref.at(x, y)) *
                           inv_sqrt2);
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
    const double sigma = mags[mid] / 0.6745;
    return std::max(sigma * sigma, 1e-12);
}

MergeResult merge_burst(const Burst& burst, const std::vector<DisplacementField>& fields,
                        const MergeConfig& config) {
    validate(config);
    if (burst.frames.empty()) throw ConfigError("merge_burst: burst has no frames");
    if (burst.reference_index >= burst.frames.size())
        throw ConfigError("merge_burst: reference index out of range");
    const GrayImage& ref = burst.frames[burst.reference_index];
    for (const GrayImage& f : burst.frames)
        if (!f.same_shape(ref)) throw GeometryError("merge_burst: frame shapes differ");
    if (fields.size() != burst.frames.size())
        throw GeometryError("merge_burst: expected one displacement field per frame");
    for (std::size_t z = 0; z < fields.size(); ++z) {
        if (z == burst.reference_index) continue;
        if (fields[z].grid.image_width != ref.width || fields[z].grid.image_height != ref.height)
            throw GeometryError("merge_burst: field " + std::to_string(z) +
                                " geometry does not match the frames");
    }

    double sigma2 = 1.0;
    if (config.c > 0)
        sigma2 = config.noise_variance ? *config.noise_variance : estimate_noise_variance(ref);
    return merge_frames(burst.frames, burst.reference_index, fields, config, sigma2);
}

GrayImage naive_average(const Burst& burst) {
    if (burst.frames.empty()) throw ConfigError("naive_average: burst has no frames");
    const GrayImage& first = burst.frames.front();
    for (const GrayImage& f : burst.frames)
        if (!f.same_shape(first)) throw GeometryError("naive_average: frame shapes differ");
    std::vector<double> acc(first.pixel_count(), 0.0);
    for (const GrayImage& f : burst.frames)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += f.data[i];
    GrayImage out(first.width, first.height);
    const double scale = 1.0 / static_cast<double>(burst.frames.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out.data[i] = static_cast<float>(acc[i] * scale);
    return out;
}

std::array<GrayImage, 4> merge_bayer_burst(const RawBurst& burst,
                                           const std::vector<DisplacementField>& fields,
                                           const MergeConfig& config) {
    validate(config);
    if (burst.frames.empty()) throw ConfigError("merge_bayer_burst: burst has no frames");
    if (burst.reference_index >= burst.frames.size())
        throw ConfigError("merge_bayer_burst: reference index out of range");

    std::vector<std::array<GrayImage, 4>> planes;
    planes.reserve(burst.frames.size());
    for (const RawFrame& f : burst.frames) planes.push_back(split_bayer_planes(f));

    std::array<GrayImage, 4> merged;
    for (int p = 0; p < 4; ++p) {
        Burst plane_burst;
        plane_burst.reference_index = burst.reference_index;
        plane_burst.schedule = burst.schedule;
        plane_burst.frames.reserve(burst.frames.size());
        for (std::size_t z = 0; z < burst.frames.size(); ++z)
            plane_burst.frames.push_back(planes[z][static_cast<std::size_t>(p)]);
        MergeConfig plane_config = config;
        if (!plane_config.noise_variance && plane_config.c > 0)
            plane_config.noise_variance =
                estimate_noise_variance(plane_burst.frames[plane_burst.reference_index]);
        merged[static_cast<std::size_t>(p)] =
            merge_burst(plane_burst, fields, plane_config).image;
    }
    return merged;
}

void write_merge_stats_csv(const MergeStats& stats, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_merge_stats_csv: cannot open '" + path.string() + "'");
    out << "frame,mean_contribution,rejected_energy_fraction\n";
    char buf[96];
    for (std::size_t z = 0; z < stats.mean_contribution.size(); ++z) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", z, stats.mean_contribution[z],
                      stats.rejected_energy_fraction[z]);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "all,,%.9g\n", stats.overall_rejected_energy_fraction);
    out << buf;
    if (!out) throw IoError("write_merge_stats_csv: write failed");
}

}  // namespace burst
