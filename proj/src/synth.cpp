#include "burst/synth.hpp"

#include <algorithm>
#include <cmath>

#include "burst/rng.hpp"

namespace burst {

namespace {

constexpr double kMaxTranslation = 12.0;
constexpr double kSeparationGap = 16.0;  // clearance between disk rims
constexpr double kBorderMargin = 24.0;   // rim-to-border clearance, covers burst shifts

void check_scene(const SyntheticScene& scene) {
    for (const Disk& d : scene.disks) {
        if (d.radius <= 0) throw ConfigError("scene: disk radius must be positive");
        if (d.cx - d.radius < 0 || d.cy - d.radius < 0 || d.cx + d.radius > scene.width ||
            d.cy + d.radius > scene.height)
            throw GeometryError("scene: disk leaves the frame");
    }
    for (std::size_t a = 0; a < scene.disks.size(); ++a) {
        for (std::size_t b = a + 1; b < scene.disks.size(); ++b) {
            const double dx = scene.disks[a].cx - scene.disks[b].cx;
            const double dy = scene.disks[a].cy - scene.disks[b].cy;
            const double min_dist = scene.disks[a].radius + scene.disks[b].radius;
            if (dx * dx + dy * dy < min_dist * min_dist)
                throw GeometryError("scene: disks overlap");
        }
    }
}

}  // namespace

SyntheticScene make_disk_scene(std::uint64_t seed, int n_disks, int size, double r_min,
                               double r_max, double contrast, double background) {
    if (n_disks < 0) throw ConfigError("make_disk_scene: n_disks must be >= 0");
    if (n_disks > 0 && (r_min <= 0 || r_max < r_min))
        throw ConfigError("make_disk_scene: bad radius range");

    SyntheticScene scene;
    scene.width = size;
    scene.height = size;
    scene.contrast = contrast;
    scene.background = background;

    std::vector<double> radii;
    for (int i = 0; i < n_disks; ++i) {
        const double t = n_disks > 1 ? static_cast<double>(i) / (n_disks - 1) : 0.0;
        radii.push_back(r_min * std::pow(r_max / r_min, t));
    }
    std::sort(radii.rbegin(), radii.rend());  // place large disks first

    std::mt19937_64 rng = make_rng(seed);
    for (double r : radii) {
        const double margin = r + kBorderMargin;
        if (2 * margin >= size)
            throw GeometryError("make_disk_scene: image too small for disk radius " +
                                std::to_string(r));
        std::uniform_real_distribution<double> ux(margin, size - margin);
        std::uniform_real_distribution<double> uy(margin, size - margin);
        bool placed = false;
        for (int attempt = 0; attempt < 20000 && !placed; ++attempt) {
            const double cx = ux(rng);
            const double cy = uy(rng);
            bool clear = true;
            for (const Disk& d : scene.disks) {
                const double dx = cx - d.cx;
                const double dy = cy - d.cy;
                const double need = r + d.radius + kSeparationGap;
                if (dx * dx + dy * dy < need * need) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                scene.disks.push_back({cx, cy, r});
                placed = true;
            }
        }
        if (!placed)
            throw GeometryError("make_disk_scene: could not place " + std::to_string(n_disks) +
                                " disks without overlap");
    }
    return scene;
}

GrayImage render_shifted(const SyntheticScene& scene, double tx, double ty) {
    SyntheticScene shifted = scene;
    for (Disk& d : shifted.disks) {
        d.cx += tx;
        d.cy += ty;
    }
    return render_scene(shifted);
}

GrayImage render_scene(const SyntheticScene& scene) {
    check_scene(scene);
    GrayImage img(scene.width, scene.height, static_cast<float>(scene.background));

    // 4x supersampling: coverage = fraction of the 16 subsamples inside.
    constexpr int kSub = 4;
    for (const Disk& d : scene.disks) {
        const int x0 = std::max(0, static_cast<int>(std::floor(d.cx - d.radius)) - 1);
        const int x1 = std::min(scene.width - 1, static_cast<int>(std::ceil(d.cx + d.radius)) + 1);
        const int y0 = std::max(0, static_cast<int>(std::floor(d.cy - d.radius)) - 1);
        const int y1 = std::min(scene.height - 1, static_cast<int>(std::ceil(d.cy + d.radius)) + 1);
        const double r2 = d.radius * d.radius;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                int inside = 0;
                for (int sy = 0; sy < kSub; ++sy) {
                    const double py = y + (sy + 0.5) / kSub - d.cy;
                    for (int sx = 0; sx < kSub; ++sx) {
                        const double px = x + (sx + 0.5) / kSub - d.cx;
                        if (px * px + py * py <= r2) ++inside;
                    }
                }
                if (inside > 0)
                    img.at(x, y) += static_cast<float>(scene.contrast * inside /
                                                       static_cast<double>(kSub * kSub));
            }
        }
    }
    return img;
}

BurstSpec random_burst_spec(int n_frames, double max_shift, double noise_sigma,
                            std::uint64_t seed) {
    if (n_frames < 1) throw ConfigError("random_burst_spec: n_frames must be >= 1");
    if (max_shift < 0 || max_shift > kMaxTranslation)
        throw ConfigError("random_burst_spec: max_shift must be in [0,12]");
    BurstSpec spec;
    spec.n_frames = n_frames;
    spec.noise_sigma = noise_sigma;
    spec.translations.assign(static_cast<std::size_t>(n_frames), {0.0, 0.0});
    std::mt19937_64 rng = make_rng(seed);
    const int bound = static_cast<int>(std::floor(max_shift));
    std::uniform_int_distribution<int> u(-bound, bound);
    const std::size_t reference = static_cast<std::size_t>(n_frames) / 2;
    for (std::size_t z = 0; z < spec.translations.size(); ++z) {
        if (z == reference) continue;
        int dx = 0;
        int dy = 0;
        do {
            dx = u(rng);
            dy = u(rng);
        } while (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy >
                 max_shift * max_shift);
        spec.translations[z] = {static_cast<double>(dx), static_cast<double>(dy)};
    }
    return spec;
}

SynthBurst synth_burst(const SyntheticScene& scene, const BurstSpec& spec, std::uint64_t seed) {
    if (spec.n_frames < 1) throw ConfigError("synth_burst: n_frames must be >= 1");
    if (static_cast<int>(spec.translations.size()) != spec.n_frames)
        throw ConfigError("synth_burst: expected one translation per frame");
    if (spec.noise_sigma < 0) throw ConfigError("synth_burst: noise_sigma must be >= 0");
    for (const auto& t : spec.translations)
        if (t[0] * t[0] + t[1] * t[1] > kMaxTranslation * kMaxTranslation + 1e-9)
            throw ConfigError("synth_burst: translation magnitude exceeds 12 px");

    SynthBurst out;
    out.translations = spec.translations;
    out.burst.reference_index = static_cast<std::size_t>(spec.n_frames) / 2;
    out.burst.schedule.n_frames = spec.n_frames;
    out.burst.schedule.frame_time_ms = 1.0;
    out.burst.schedule.burst_duration_ms = static_cast<double>(spec.n_frames);
    out.burst.schedule.inter_burst_gap_ms = 100.0;
    out.burst.schedule.exposure_ms = 1.0;
    out.burst.schedule.gain_db = 0.0;

    out.burst.frames.reserve(static_cast<std::size_t>(spec.n_frames));
    for (int z = 0; z < spec.n_frames; ++z) {
        const auto& t = spec.translations[static_cast<std::size_t>(z)];
        GrayImage frame = render_shifted(scene, t[0], t[1]);
        if (static_cast<std::size_t>(z) == out.burst.reference_index)
            out.clean_reference = frame;
        if (spec.noise_sigma > 0) {
            std::mt19937_64 rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(z)));
            std::normal_distribution<double> noise(0.0, spec.noise_sigma);
            for (float& v : frame.data) {
                double nv = v + noise(rng);
                if (nv < 0.0) nv = 0.0;
                if (nv > 1.0) nv = 1.0;
                v = static_cast<float>(nv);
            }
        }
        out.burst.frames.push_back(std::move(frame));
    }
    return out;
}

}  // namespace burst
