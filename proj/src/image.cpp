#include "burst/image.hpp"

#include <cmath>
#include <limits>

namespace burst {

int clamp_index(int i, int n) {
    if (i < 0) return 0;
    if (i >= n) return n - 1;
    return i;
}

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int j = i % period;
    if (j < 0) j += period;
    return j < n ? j : period - 1 - j;
}

float sample_clamped(const GrayImage& img, int x, int y) {
    return img.at(clamp_index(x, img.width), clamp_index(y, img.height));
}

float sample_reflected(const GrayImage& img, int x, int y) {
    return img.at(reflect_index(x, img.width), reflect_index(y, img.height));
}

double image_mean(const GrayImage& img) {
    if (img.data.empty()) return 0.0;
    double sum = 0.0;
    for (float v : img.data) sum += v;
    return sum / static_cast<double>(img.data.size());
}

double image_variance(const GrayImage& img) {
    if (img.data.empty()) return 0.0;
    const double mean = image_mean(img);
    double sum = 0.0;
    for (float v : img.data) {
        const double d = v - mean;
        sum += d * d;
    }
    return sum / static_cast<double>(img.data.size());
}

double mean_squared_error(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b)) throw GeometryError("mean_squared_error: image shapes differ");
    if (a.data.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.data.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
    const double mse = mean_squared_error(a, b);
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

GrayImage clamp01(GrayImage img) {
    for (float& v : img.data) {
        if (v < 0.0f) v = 0.0f;
        if (v > 1.0f) v = 1.0f;
    }
    return img;
}

}  // namespace burst
