#include "burst/pnm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

namespace burst {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw IoError("load_gray: malformed header in '" + path + "'");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) throw IoError("load_gray: header value out of range in '" + path + "'");
        c = in.get();
    }
    return static_cast<int>(value);
}

}  // namespace

void save_gray(const GrayImage& img, const std::filesystem::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16)
        throw ConfigError("save_gray: bit_depth must be 8 or 16, got " + std::to_string(bit_depth));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_gray: cannot open '" + path.string() + "' for writing");

    const long max_value = (1L << bit_depth) - 1;
    out << "P5\n" << img.width << " " << img.height << "\n" << max_value << "\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(img.pixel_count() * (bit_depth == 16 ? 2 : 1));
    for (float v : img.data) {
        long q = static_cast<long>(std::floor(static_cast<double>(v) * max_value + 0.5));
        if (q < 0) q = 0;
        if (q > max_value) q = max_value;
        if (bit_depth == 16) {
            bytes.push_back(static_cast<unsigned char>(q >> 8));  // big-endian per the format
            bytes.push_back(static_cast<unsigned char>(q & 0xff));
        } else {
            bytes.push_back(static_cast<unsigned char>(q));
        }
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("save_gray: write failed for '" + path.string() + "'");
}

GrayImage load_gray(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_gray: cannot open '" + path.string() + "'");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw IoError("load_gray: '" + path.string() + "' is not a binary P5 graymap");

    const int width = next_header_int(in, path.string());
    const int height = next_header_int(in, path.string());
    const int max_value = next_header_int(in, path.string());
    if (width <= 0 || height <= 0 || max_value <= 0 || max_value > 65535)
        throw IoError("load_gray: bad header in '" + path.string() + "'");
    // next_header_int consumed exactly one whitespace-terminated token; the
    // final get() already ate the single separator before the raster.

    const int bytes_per_sample = max_value > 255 ? 2 : 1;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<unsigned char> bytes(n * bytes_per_sample);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw IoError("load_gray: truncated raster in '" + path.string() + "'");

    GrayImage img(width, height);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned v = bytes_per_sample == 2
                               ? static_cast<unsigned>((bytes[2 * i] << 8) | bytes[2 * i + 1])
                               : bytes[i];
        float f = static_cast<float>(static_cast<double>(v) / max_value);
        if (f > 1.0f) f = 1.0f;
        img.data[i] = f;
    }
    return img;
}

}  // namespace burst
