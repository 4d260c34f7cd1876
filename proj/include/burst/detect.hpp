#pragma once

#include <vector>

#include "burst/image.hpp"

namespace burst {

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double scale = 0.0;     // blur sigma of the response plane; blob radius ~ scale*sqrt(2)
    double response = 0.0;  // |scale-normalized difference-of-Gaussians response|
};

/// Scale-normalized difference-of-Gaussians blob detector. Keypoints are
/// strict 3D local extrema (x, y, scale) of the normalized response with
/// |response| >= peak_threshold, screened by the standard principal-curvature
/// ratio test so contour responses do not fire, with subpixel position from
/// a quadratic fit.
struct DetectConfig {
    double peak_threshold = 0.015;
    double sigma_base = 1.6;
    int n_scales = 10;        // Gaussian levels, sigma_base * 2^(k/2)
    double edge_ratio = 10.0;  // max principal curvature ratio
};

GrayImage gaussian_blur(const GrayImage& image, double sigma);

std::vector<Keypoint> detect_blobs(const GrayImage& image, const DetectConfig& config);
std::vector<Keypoint> detect_blobs(const GrayImage& image, double peak_threshold);

}  // namespace burst
