#include "burst/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace burst {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Local search around per-tile initial estimates. init may be null for a
// zero-seeded search.
DisplacementField search_level(const GrayImage& ref, const GrayImage& alt, const TileGrid& grid,
                               const DisplacementField* init, int radius, DistanceNorm norm) {
    DisplacementField field;
    field.grid = grid;
    field.d.resize(grid.tile_count());
    field.residual.resize(grid.tile_count());
    field.reliable.assign(grid.tile_count(), 1);
    for (int j = 0; j < grid.n_tiles_y; ++j) {
        for (int i = 0; i < grid.n_tiles_x; ++i) {
            const std::size_t idx = grid.index(i, j);
            const Displacement seed = init ? init->d[idx] : Displacement{};
            const TileMatch m = align_tile(ref, grid.origin_x(i), grid.origin_y(j),
                                           grid.tile_size, alt, seed, radius, norm);
            field.d[idx] = m.d;
            field.residual[idx] = m.residual;
        }
    }
    return field;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    return values[mid];
}

}  // namespace

TileGrid TileGrid::for_image(int width, int height, int tile_size) {
    if (!is_power_of_two(tile_size))
        throw ConfigError("tile grid: tile_size must be a power of two, got " +
                          std::to_string(tile_size));
    if (tile_size > width || tile_size > height)
        throw GeometryError("tile grid: tile size " + std::to_string(tile_size) +
                            " exceeds image " + std::to_string(width) + "x" +
                            std::to_string(height));
    TileGrid g;
    g.image_width = width;
    g.image_height = height;
    g.tile_size = tile_size;
    g.stride = std::max(1, tile_size / 2);
    g.n_tiles_x = width == tile_size ? 1 : ceil_div(width - tile_size, g.stride) + 1;
    g.n_tiles_y = height == tile_size ? 1 : ceil_div(height - tile_size, g.stride) + 1;
    return g;
}

AlignConfig AlignConfig::defaults() {
    AlignConfig c;
    c.levels = {
        {16, 2, DistanceNorm::L1},  // finest: L1 resists noise outliers
        {16, 4, DistanceNorm::L2},
        {16, 4, DistanceNorm::L2},
        {8, 8, DistanceNorm::L2},
    };
    c.unreliable_residual_factor = 8.0;
    return c;
}

void validate(const AlignConfig& config) {
    if (config.levels.empty()) throw ConfigError("align config: no levels");
    for (const AlignLevel& lvl : config.levels) {
        if (lvl.tile_size < 8)
            throw ConfigError("align config: tile_size must be >= 8, got " +
                              std::to_string(lvl.tile_size));
        if (!is_power_of_two(lvl.tile_size))
            throw ConfigError("align config: tile_size must be a power of two, got " +
                              std::to_string(lvl.tile_size));
        if (lvl.search_radius < 0)
            throw ConfigError("align config: search_radius must be >= 0");
        if (lvl.search_radius > 32)
            throw ConfigError("align config: search_radius " + std::to_string(lvl.search_radius) +
                              " exceeds the 32 px bound for robust alignment");
    }
    if (config.unreliable_residual_factor <= 0)
        throw ConfigError("align config: unreliable_residual_factor must be positive");
}

double tile_distance(const GrayImage& ref, int rx, int ry, const GrayImage& alt, int ax, int ay,
                     int tile_size, DistanceNorm norm) {
    double acc = 0.0;
    const bool interior = ax >= 0 && ay >= 0 && ax + tile_size <= alt.width &&
                          ay + tile_size <= alt.height;
    if (interior) {
        for (int v = 0; v < tile_size; ++v) {
            const float* rrow = &ref.at(rx, ry + v);
            const float* arow = &alt.at(ax, ay + v);
            if (norm == DistanceNorm::L1) {
                for (int u = 0; u < tile_size; ++u)
                    acc += std::abs(static_cast<double>(rrow[u]) - arow[u]);
            } else {
                for (int u = 0; u < tile_size; ++u) {
                    const double d = static_cast<double>(rrow[u]) - arow[u];
                    acc += d * d;
                }
            }
        }
        return acc;
    }
    for (int v = 0; v < tile_size; ++v) {
        for (int u = 0; u < tile_size; ++u) {
            const double d = static_cast<double>(ref.at(rx + u, ry + v)) -
                             sample_clamped(alt, ax + u, ay + v);
            acc += norm == DistanceNorm::L1 ? std::abs(d) : d * d;
        }
    }
    return acc;
}

TileMatch align_tile(const GrayImage& ref, int rx, int ry, int tile_size, const GrayImage& alt,
                     Displacement init, int search_radius, DistanceNorm norm) {
    TileMatch best;
    double best_dist = std::numeric_limits<double>::infinity();
    long best_mag2 = 0;
    for (int ddy = -search_radius; ddy <= search_radius; ++ddy) {
        for (int ddx = -search_radius; ddx <= search_radius; ++ddx) {
            const int dx = init.dx + ddx;
            const int dy = init.dy + ddy;
            const double dist =
                tile_distance(ref, rx, ry, alt, rx + dx, ry + dy, tile_size, norm);
            const long mag2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
            if (dist < best_dist || (dist == best_dist && mag2 < best_mag2)) {
                best_dist = dist;
                best_mag2 = mag2;
                best.d = {dx, dy};
            }
        }
    }
    best.residual = best_dist;
    return best;
}

DisplacementField upsample_displacements(const DisplacementField& coarse, int factor,
                                         const TileGrid& fine_grid, const GrayImage& ref_level,
                                         const GrayImage& alt_level, DistanceNorm norm) {
    if (factor < 1) throw ConfigError("upsample_displacements: factor must be >= 1");
    if (fine_grid.image_width != ref_level.width || fine_grid.image_height != ref_level.height)
        throw GeometryError("upsample_displacements: fine grid does not match the level image");
    if (!ref_level.same_shape(alt_level))
        throw GeometryError("upsample_displacements: ref/alt level shapes differ");
    if (coarse.d.size() != coarse.grid.tile_count())
        throw GeometryError("upsample_displacements: coarse field is inconsistent");

    const TileGrid& cg = coarse.grid;
    DisplacementField fine;
    fine.grid = fine_grid;
    fine.d.resize(fine_grid.tile_count());
    fine.residual.resize(fine_grid.tile_count());
    fine.reliable.assign(fine_grid.tile_count(), 1);

    auto nearest_and_adjacent = [](double g, int n, int& near, int& adj) {
        near = static_cast<int>(std::lround(g));
        near = std::clamp(near, 0, n - 1);
        adj = near + (g >= near ? 1 : -1);
        adj = std::clamp(adj, 0, n - 1);
    };

    for (int j = 0; j < fine_grid.n_tiles_y; ++j) {
        for (int i = 0; i < fine_grid.n_tiles_x; ++i) {
            const int ox = fine_grid.origin_x(i);
            const int oy = fine_grid.origin_y(j);
            const double cx = (ox + fine_grid.tile_size / 2.0) / factor;
            const double cy = (oy + fine_grid.tile_size / 2.0) / factor;
            const double gx = (cx - cg.tile_size / 2.0) / cg.stride;
            const double gy = (cy - cg.tile_size / 2.0) / cg.stride;
            int ci, ci_adj, cj, cj_adj;
            nearest_and_adjacent(gx, cg.n_tiles_x, ci, ci_adj);
            nearest_and_adjacent(gy, cg.n_tiles_y, cj, cj_adj);

            const Displacement candidates[3] = {
                coarse.d[cg.index(ci, cj)],
                coarse.d[cg.index(ci_adj, cj)],
                coarse.d[cg.index(ci, cj_adj)],
            };
            double best_dist = std::numeric_limits<double>::infinity();
            Displacement best{};
            for (const Displacement& cd : candidates) {
                const Displacement d{cd.dx * factor, cd.dy * factor};
                const double dist = tile_distance(ref_level, ox, oy, alt_level, ox + d.dx,
                                                  oy + d.dy, fine_grid.tile_size, norm);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = d;
                }
            }
            const std::size_t idx = fine_grid.index(i, j);
            fine.d[idx] = best;
            fine.residual[idx] = best_dist;
        }
    }
    return fine;
}

DisplacementField align_frame(const Pyramid& ref, const Pyramid& alt, const AlignConfig& config) {
    validate(config);
    if (ref.levels.size() != alt.levels.size())
        throw GeometryError("align_frame: pyramids have different depths");
    for (std::size_t k = 0; k < ref.levels.size(); ++k)
        if (!ref.levels[k].same_shape(alt.levels[k]))
            throw GeometryError("align_frame: pyramid level " + std::to_string(k) +
                                " shapes differ");
    if (config.levels.size() != ref.levels.size())
        throw ConfigError("align_frame: config has " + std::to_string(config.levels.size()) +
                          " levels but pyramid has " + std::to_string(ref.levels.size()));

    const int coarsest = static_cast<int>(ref.levels.size()) - 1;
    DisplacementField field;
    for (int k = coarsest; k >= 0; --k) {
        const AlignLevel& lvl = config.levels[static_cast<std::size_t>(k)];
        const GrayImage& ref_img = ref.levels[static_cast<std::size_t>(k)];
        const GrayImage& alt_img = alt.levels[static_cast<std::size_t>(k)];
        const TileGrid grid = TileGrid::for_image(ref_img.width, ref_img.height, lvl.tile_size);
        if (k == coarsest) {
            field = search_level(ref_img, alt_img, grid, nullptr, lvl.search_radius, lvl.norm);
        } else {
            const DisplacementField seeds = upsample_displacements(
                field, ref.factors[static_cast<std::size_t>(k)], grid, ref_img, alt_img, lvl.norm);
            field = search_level(ref_img, alt_img, grid, &seeds, lvl.search_radius, lvl.norm);
        }
    }

    const double median = median_of(field.residual);
    const double threshold = config.unreliable_residual_factor * median;
    for (std::size_t t = 0; t < field.residual.size(); ++t)
        field.reliable[t] = field.residual[t] <= threshold ? 1 : 0;
    return field;
}

DisplacementField zero_field(int width, int height, int tile_size) {
    DisplacementField field;
    field.grid = TileGrid::for_image(width, height, tile_size);
    field.d.assign(field.grid.tile_count(), Displacement{});
    field.residual.assign(field.grid.tile_count(), 0.0);
    field.reliable.assign(field.grid.tile_count(), 1);
    return field;
}

std::vector<DisplacementField> align_burst(const Burst& burst, const AlignConfig& config,
                                           const PyramidConfig& pyramid_config) {
    if (burst.frames.empty()) throw ConfigError("align_burst: burst has no frames");
    if (burst.reference_index >= burst.frames.size())
        throw ConfigError("align_burst: reference index out of range");
    validate(config);

    std::vector<int> min_sizes;
    for (const AlignLevel& lvl : config.levels) min_sizes.push_back(lvl.tile_size);

    const GrayImage& ref_img = burst.frames[burst.reference_index];
    const Pyramid ref_pyr = build_pyramid(ref_img, pyramid_config, min_sizes);

    std::vector<DisplacementField> fields(burst.frames.size());
    for (std::size_t z = 0; z < burst.frames.size(); ++z) {
        if (z == burst.reference_index) {
            fields[z] = zero_field(ref_img.width, ref_img.height, config.levels[0].tile_size);
            continue;
        }
        if (!burst.frames[z].same_shape(ref_img))
            throw GeometryError("align_burst: frame " + std::to_string(z) +
                                " shape differs from reference");
        const Pyramid alt_pyr = build_pyramid(burst.frames[z], pyramid_config, min_sizes);
        fields[z] = align_frame(ref_pyr, alt_pyr, config);
    }
    return fields;
}

void write_field_csv(const DisplacementField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_field_csv: cannot open '" + path.string() + "'");
    out << "tile_x,tile_y,dx,dy,residual,reliable\n";
    char buf[128];
    for (int j = 0; j < field.grid.n_tiles_y; ++j) {
        for (int i = 0; i < field.grid.n_tiles_x; ++i) {
            const std::size_t idx = field.grid.index(i, j);
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.9g,%d\n", i, j, field.d[idx].dx,
                          field.d[idx].dy, field.residual[idx],
                          static_cast<int>(field.reliable[idx]));
            out << buf;
        }
    }
    if (!out) throw IoError("write_field_csv: write failed for '" + path.string() + "'");
}

}  // namespace burst
