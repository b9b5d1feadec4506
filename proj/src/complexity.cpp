#include "drawlab/complexity.hpp"

#include <algorithm>
#include <cmath>

#include "drawlab/errors.hpp"
#include "drawlab/imaging.hpp"

namespace drawlab::complexity {

namespace {

constexpr double kTensorSigma = 1.5;

inline int clamp_index(int v, int hi) { return std::clamp(v, 0, hi); }

Eigen::ArrayXXd gaussian_blur(const Eigen::ArrayXXd& src, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    Eigen::VectorXd kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    }
    kernel /= kernel.sum();

    const int h = static_cast<int>(src.rows());
    const int w = static_cast<int>(src.cols());
    Eigen::ArrayXXd tmp(h, w), out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[i + radius] * src(r, clamp_index(c + i, w - 1));
            }
            tmp(r, c) = acc;
        }
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[i + radius] * tmp(clamp_index(r + i, h - 1), c);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

} // namespace

int harris_corners(const GrayImage& img, const HarrisParams& params) {
    const int h = img.height();
    const int w = img.width();
    if (h < 3 || w < 3) throw Error("harris_corners: image must be at least 3x3");
    if (params.nms_radius < 0) throw Error("harris_corners: nms_radius must be non-negative");

    const Eigen::ArrayXXd& v = img.values;
    Eigen::ArrayXXd gx(h, w), gy(h, w);
    for (int r = 0; r < h; ++r) {
        const int rm = clamp_index(r - 1, h - 1), rp = clamp_index(r + 1, h - 1);
        for (int c = 0; c < w; ++c) {
            const int cm = clamp_index(c - 1, w - 1), cp = clamp_index(c + 1, w - 1);
            gx(r, c) = (v(rm, cp) + 2.0 * v(r, cp) + v(rp, cp)) -
                       (v(rm, cm) + 2.0 * v(r, cm) + v(rp, cm));
            gy(r, c) = (v(rp, cm) + 2.0 * v(rp, c) + v(rp, cp)) -
                       (v(rm, cm) + 2.0 * v(rm, c) + v(rm, cp));
        }
    }

    const Eigen::ArrayXXd sxx = gaussian_blur(gx * gx, kTensorSigma);
    const Eigen::ArrayXXd syy = gaussian_blur(gy * gy, kTensorSigma);
    const Eigen::ArrayXXd sxy = gaussian_blur(gx * gy, kTensorSigma);

    const Eigen::ArrayXXd trace = sxx + syy;
    const Eigen::ArrayXXd response = sxx * syy - sxy * sxy - params.k * trace * trace;

    const double max_response = response.maxCoeff();
    if (max_response <= 0.0) return 0;
    const double threshold = params.rel_threshold * max_response;

    int corners = 0;
    const int radius = params.nms_radius;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double value = response(r, c);
            if (value <= threshold) continue;
            bool is_peak = true;
            for (int dr = -radius; dr <= radius && is_peak; ++dr) {
                const int rr = r + dr;
                if (rr < 0 || rr >= h) continue;
                for (int dc = -radius; dc <= radius; ++dc) {
                    const int cc = c + dc;
                    if (cc < 0 || cc >= w || (dr == 0 && dc == 0)) continue;
                    const double other = response(rr, cc);
                    // Ties go to the first pixel in row-major order.
                    if (other > value || (other == value && (rr < r || (rr == r && cc < c)))) {
                        is_peak = false;
                        break;
                    }
                }
            }
            corners += is_peak;
        }
    }
    return corners;
}

double palette_variability(const palette::Palette& palette) {
    if (palette.K < 1) throw Error("palette_variability: palette has no centroids");

    Eigen::MatrixXd rgb(palette.K, 3);
    for (int j = 0; j < palette.K; ++j) {
        rgb.row(j) = imaging::lab_to_srgb(palette.centroids.row(j).transpose()).transpose();
    }
    const Eigen::RowVector3d mean = rgb.colwise().mean();
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        total += (rgb.col(c).array() - mean[c]).square().mean();
    }
    return total / 3.0;
}

AgeScatter complexity_by_age(const std::vector<ComplexityRecord>& records,
                             const std::vector<corpus::AgeBin>& bins) {
    AgeScatter out;
    for (const auto& rec : records) {
        if (!rec.age) continue;
        out.corner_points.emplace_back(*rec.age, static_cast<double>(rec.corner_count));
        out.variability_points.emplace_back(*rec.age, rec.palette_variability);
    }

    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };

    for (const auto& bin : bins) {
        std::vector<double> corners, variability;
        for (const auto& rec : records) {
            if (rec.age && bin.contains(*rec.age)) {
                corners.push_back(static_cast<double>(rec.corner_count));
                variability.push_back(rec.palette_variability);
            }
        }
        if (corners.empty()) continue;
        out.bins.push_back({bin, static_cast<int>(corners.size()), median(corners),
                            median(variability)});
    }
    return out;
}

} // namespace drawlab::complexity
