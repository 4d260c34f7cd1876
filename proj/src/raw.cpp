#include "burst/raw.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace burst {

namespace {

void check_bayer_geometry(const RawFrame& frame, const char* op) {
    if (frame.pattern == BayerPattern::None)
        throw ConfigError(std::string(op) + ": frame has no Bayer pattern");
    if (frame.width % 2 != 0 || frame.height % 2 != 0)
        throw GeometryError(std::string(op) + ": Bayer frame dimensions must be even, got " +
                            std::to_string(frame.width) + "x" + std::to_string(frame.height));
}

}  // namespace

BayerPattern bayer_pattern_from_string(const std::string& s) {
    if (s == "RGGB") return BayerPattern::RGGB;
    if (s == "BGGR") return BayerPattern::BGGR;
    if (s == "GRBG") return BayerPattern::GRBG;
    if (s == "GBRG") return BayerPattern::GBRG;
    if (s == "NONE") return BayerPattern::None;
    throw ConfigError("unknown bayer_pattern '" + s + "'");
}

std::string to_string(BayerPattern p) {
    switch (p) {
        case BayerPattern::RGGB: return "RGGB";
        case BayerPattern::BGGR: return "BGGR";
        case BayerPattern::GRBG: return "GRBG";
        case BayerPattern::GBRG: return "GBRG";
        case BayerPattern::None: return "NONE";
    }
    return "NONE";
}

RawFrame load_raw(const std::filesystem::path& path, const RawMeta& meta) {
    if (meta.width <= 0 || meta.height <= 0)
        throw ConfigError("load_raw: non-positive frame dimensions");
    if (meta.bit_depth < 1 || meta.bit_depth > 16)
        throw ConfigError("load_raw: bit_depth must be in [1,16], got " +
                          std::to_string(meta.bit_depth));
    if (meta.pattern != BayerPattern::None && (meta.width % 2 != 0 || meta.height % 2 != 0))
        throw ConfigError("load_raw: Bayer frames require even dimensions");

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_raw: cannot open '" + path.string() + "'");
    in.seekg(0, std::ios::end);
    const std::uint64_t actual = static_cast<std::uint64_t>(in.tellg());
    const std::uint64_t expected =
        2ull * static_cast<std::uint64_t>(meta.width) * static_cast<std::uint64_t>(meta.height);
    if (actual != expected)
        throw IoError("load_raw: '" + path.string() + "' is " + std::to_string(actual) +
                      " bytes, expected " + std::to_string(expected) + " (" +
                      std::to_string(meta.width) + "x" + std::to_string(meta.height) +
                      " 16-bit)");
    in.seekg(0, std::ios::beg);

    std::vector<unsigned char> bytes(expected);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected));
    if (!in) throw IoError("load_raw: short read from '" + path.string() + "'");

    RawFrame frame;
    frame.width = meta.width;
    frame.height = meta.height;
    frame.bit_depth = meta.bit_depth;
    frame.pattern = meta.pattern;
    frame.black_level = meta.black_level;
    frame.pixels.resize(static_cast<std::size_t>(meta.width) * meta.height);
    const int max_value = frame.max_value();
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        const std::uint16_t v =
            static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
        if (v > max_value)
            throw IoError("load_raw: pixel value " + std::to_string(v) + " exceeds " +
                          std::to_string(meta.bit_depth) + "-bit range");
        frame.pixels[i] = v;
    }
    return frame;
}

void save_raw(const RawFrame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_raw: cannot open '" + path.string() + "' for writing");
    std::vector<unsigned char> bytes(frame.pixels.size() * 2);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        bytes[2 * i] = static_cast<unsigned char>(frame.pixels[i] & 0xff);
        bytes[2 * i + 1] = static_cast<unsigned char>(frame.pixels[i] >> 8);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("save_raw: write failed for '" + path.string() + "'");
}

DarkFrame average_dark_frames(const std::vector<RawFrame>& frames) {
    if (frames.empty()) throw ConfigError("average_dark_frames: no frames");
    DarkFrame dark;
    dark.width = frames[0].width;
    dark.height = frames[0].height;
    std::vector<double> acc(frames[0].pixels.size(), 0.0);
    for (const RawFrame& f : frames) {
        if (f.width != dark.width || f.height != dark.height)
            throw GeometryError("average_dark_frames: frame dimensions differ");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += f.pixels[i];
    }
    dark.values.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        dark.values[i] = static_cast<float>(acc[i] / static_cast<double>(frames.size()));
    return dark;
}

RawFrame subtract_dark(const RawFrame& frame, const DarkFrame& dark) {
    if (frame.width != dark.width || frame.height != dark.height)
        throw GeometryError("subtract_dark: dark frame is " + std::to_string(dark.width) + "x" +
                            std::to_string(dark.height) + ", frame is " +
                            std::to_string(frame.width) + "x" + std::to_string(frame.height));
    RawFrame out = frame;
    out.black_level = 0;
    const long max_value = out.max_value();
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const double d = static_cast<double>(frame.pixels[i]) - dark.values[i];
        long v = std::lround(d);
        if (v < 0) v = 0;
        if (v > max_value) v = max_value;
        out.pixels[i] = static_cast<std::uint16_t>(v);
    }
    return out;
}

GrayImage bayer_to_gray(const RawFrame& frame) {
    check_bayer_geometry(frame, "bayer_to_gray");
    const int w = frame.width / 2;
    const int h = frame.height / 2;
    const double max_value = static_cast<double>(frame.max_value());
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double sum = static_cast<double>(frame.at(2 * x, 2 * y)) +
                               frame.at(2 * x + 1, 2 * y) + frame.at(2 * x, 2 * y + 1) +
                               frame.at(2 * x + 1, 2 * y + 1);
            out.at(x, y) = static_cast<float>(sum / 4.0 / max_value);
        }
    }
    return out;
}

std::array<GrayImage, 4> split_bayer_planes(const RawFrame& frame) {
    check_bayer_geometry(frame, "split_bayer_planes");
    const int w = frame.width / 2;
    const int h = frame.height / 2;
    const double max_value = static_cast<double>(frame.max_value());
    std::array<GrayImage, 4> planes = {GrayImage(w, h), GrayImage(w, h), GrayImage(w, h),
                                       GrayImage(w, h)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            planes[0].at(x, y) = static_cast<float>(frame.at(2 * x, 2 * y) / max_value);
            planes[1].at(x, y) = static_cast<float>(frame.at(2 * x + 1, 2 * y) / max_value);
            planes[2].at(x, y) = static_cast<float>(frame.at(2 * x, 2 * y + 1) / max_value);
            planes[3].at(x, y) = static_cast<float>(frame.at(2 * x + 1, 2 * y + 1) / max_value);
        }
    }
    return planes;
}

RawFrame recombine_bayer_planes(const std::array<GrayImage, 4>& planes, BayerPattern pattern,
                                int bit_depth, int black_level) {
    if (pattern == BayerPattern::None)
        throw ConfigError("recombine_bayer_planes: pattern must not be NONE");
    const int w = planes[0].width;
    const int h = planes[0].height;
    for (const GrayImage& p : planes)
        if (p.width != w || p.height != h)
            throw GeometryError("recombine_bayer_planes: plane dimensions differ");

    RawFrame frame;
    frame.width = 2 * w;
    frame.height = 2 * h;
    frame.bit_depth = bit_depth;
    frame.pattern = pattern;
    frame.black_level = black_level;
    frame.pixels.resize(static_cast<std::size_t>(frame.width) * frame.height);
    const long max_value = frame.max_value();
    auto quantize = [max_value](float v) {
        long q = std::lround(static_cast<double>(v) * static_cast<double>(max_value));
        if (q < 0) q = 0;
        if (q > max_value) q = max_value;
        return static_cast<std::uint16_t>(q);
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            frame.at(2 * x, 2 * y) = quantize(planes[0].at(x, y));
            frame.at(2 * x + 1, 2 * y) = quantize(planes[1].at(x, y));
            frame.at(2 * x, 2 * y + 1) = quantize(planes[2].at(x, y));
            frame.at(2 * x + 1, 2 * y + 1) = quantize(planes[3].at(x, y));
        }
    }
    return frame;
}

GrayImage raw_to_gray_full(const RawFrame& frame) {
    const double max_value = static_cast<double>(frame.max_value());
    GrayImage out(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i)
        out.data[i] = static_cast<float>(frame.pixels[i] / max_value);
    return out;
}

RawFrame gray_to_raw(const GrayImage& img, int bit_depth) {
    if (bit_depth < 1 || bit_depth > 16) throw ConfigError("gray_to_raw: bad bit depth");
    RawFrame frame;
    frame.width = img.width;
    frame.height = img.height;
    frame.bit_depth = bit_depth;
    frame.pattern = BayerPattern::None;
    frame.black_level = 0;
    frame.pixels.resize(img.pixel_count());
    const long max_value = frame.max_value();
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        long q = std::lround(static_cast<double>(img.data[i]) * static_cast<double>(max_value));
        if (q < 0) q = 0;
        if (q > max_value) q = max_value;
        frame.pixels[i] = static_cast<std::uint16_t>(q);
    }
    return frame;
}

}  // namespace burst
