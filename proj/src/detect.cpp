#include "burst/detect.hpp"

#include <algorithm>
#include <cmath>

#include "burst/pyramid.hpp"

namespace burst {

namespace {

// Separable convolution with clamped borders, double accumulation.
GrayImage convolve_separable(const GrayImage& image, const std::vector<double>& kernel) {
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    GrayImage tmp(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[static_cast<std::size_t>(t + radius)] *
                       image.at(clamp_index(x + t, image.width), y);
            tmp.at(x, y) = static_cast<float>(acc);
        }
    }
    GrayImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[static_cast<std::size_t>(t + radius)] *
                       tmp.at(x, clamp_index(y + t, image.height));
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

bool is_strict_extremum(const std::vector<GrayImage>& dog, int k, int x, int y, float v) {
    if (v > 0) {
        for (int dk = -1; dk <= 1; ++dk)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dk == 0 && dy == 0 && dx == 0) continue;
                    if (dog[static_cast<std::size_t>(k + dk)].at(x + dx, y + dy) >= v)
                        return false;
                }
        return true;
    }
    for (int dk = -1; dk <= 1; ++dk)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dk == 0 && dy == 0 && dx == 0) continue;
                if (dog[static_cast<std::size_t>(k + dk)].at(x + dx, y + dy) <= v)
                    return false;
            }
    return true;
}

}  // namespace

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
    if (sigma <= 0) return image;
    return convolve_separable(image, gaussian_kernel(sigma));
}

std::vector<Keypoint> detect_blobs(const GrayImage& image, const DetectConfig& config) {
    if (config.peak_threshold <= 0) throw ConfigError("detect_blobs: threshold must be positive");
    if (config.n_scales < 3) throw ConfigError("detect_blobs: need at least 3 scales");
    if (image.width < 8 || image.height < 8) return {};

    const double ratio = std::sqrt(2.0);

    // Incremental scale space: each level blurs the previous one up to
    // sigma_base * 2^(k/2) of total applied blur.
    std::vector<double> sigmas(static_cast<std::size_t>(config.n_scales));
    for (int k = 0; k < config.n_scales; ++k)
        sigmas[static_cast<std::size_t>(k)] = config.sigma_base * std::pow(2.0, k / 2.0);

    std::vector<GrayImage> gauss;
    gauss.reserve(sigmas.size());
    gauss.push_back(gaussian_blur(image, sigmas[0]));
    for (std::size_t k = 1; k < sigmas.size(); ++k) {
        const double delta = std::sqrt(sigmas[k] * sigmas[k] - sigmas[k - 1] * sigmas[k - 1]);
        gauss.push_back(gaussian_blur(gauss.back(), delta));
    }

    // Scale-normalized response: DoG / (ratio - 1) approximates the
    // sigma^2-normalized Laplacian.
    const float norm = static_cast<float>(1.0 / (ratio - 1.0));
    std::vector<GrayImage> dog;
    dog.reserve(gauss.size() - 1);
    for (std::size_t k = 0; k + 1 < gauss.size(); ++k) {
        GrayImage d(image.width, image.height);
        for (std::size_t i = 0; i < d.data.size(); ++i)
            d.data[i] = (gauss[k + 1].data[i] - gauss[k].data[i]) * norm;
        dog.push_back(std::move(d));
    }

    const double edge = config.edge_ratio;
    const double edge_bound = (edge + 1.0) * (edge + 1.0) / edge;

    std::vector<Keypoint> keypoints;
    for (int k = 1; k + 1 < static_cast<int>(dog.size()); ++k) {
        const GrayImage& plane = dog[static_cast<std::size_t>(k)];
        const double plane_sigma =
            std::sqrt(sigmas[static_cast<std::size_t>(k)] * sigmas[static_cast<std::size_t>(k) + 1]);
        for (int y = 1; y + 1 < image.height; ++y) {
            for (int x = 1; x + 1 < image.width; ++x) {
                const float v = plane.at(x, y);
                if (std::abs(v) < config.peak_threshold) continue;
                if (!is_strict_extremum(dog, k, x, y, v)) continue;

                const double dxx = plane.at(x + 1, y) + plane.at(x - 1, y) - 2.0 * v;
                const double dyy = plane.at(x, y + 1) + plane.at(x, y - 1) - 2.0 * v;
                const double dxy = (plane.at(x + 1, y + 1) + plane.at(x - 1, y - 1) -
                                    plane.at(x + 1, y - 1) - plane.at(x - 1, y + 1)) /
                                   4.0;
                const double tr = dxx + dyy;
                const double det = dxx * dyy - dxy * dxy;
                if (det <= 0 || tr * tr / det >= edge_bound) continue;  // contour response

                // Subpixel offset from the 2D quadratic fit H * delta = -g.
                const double gx = (plane.at(x + 1, y) - plane.at(x - 1, y)) / 2.0;
                const double gy = (plane.at(x, y + 1) - plane.at(x, y - 1)) / 2.0;
                double off_x = 0.0;
                double off_y = 0.0;
                if (std::abs(det) > 1e-20) {
                    off_x = -(dyy * gx - dxy * gy) / det;
                    off_y = -(dxx * gy - dxy * gx) / det;
                }
                off_x = std::clamp(off_x, -1.0, 1.0);
                off_y = std::clamp(off_y, -1.0, 1.0);

                keypoints.push_back({x + off_x, y + off_y, plane_sigma, std::abs(v)});
            }
        }
    }
    return keypoints;
}

std::vector<Keypoint> detect_blobs(const GrayImage& image, double peak_threshold) {
    DetectConfig config;
    config.peak_threshold = peak_threshold;
    return detect_blobs(image, config);
}

}  // namespace burst
