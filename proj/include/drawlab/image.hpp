#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace drawlab {

/// A CIE L*a*b* color: (L, a, b) with L in [0,100].
using Lab = Eigen::Vector3d;

/// Row-major list of LAB pixels, one pixel per row.
using LabPoints = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Binary raster, (row, col) indexed.
using BinaryMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// 8-bit RGB raster, interleaved row-major.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    RasterImage() = default;
    RasterImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 255) {}

    std::uint8_t* pixel(int row, int col) {
        return rgb.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }
    const std::uint8_t* pixel(int row, int col) const {
        return rgb.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }
};

/// Real-valued single-channel raster with intensities in [0,255].
/// values(r, c): row r from the top, column c from the left.
struct GrayImage {
    Eigen::ArrayXXd values;

    int height() const { return static_cast<int>(values.rows()); }
    int width() const { return static_cast<int>(values.cols()); }
};

/// Per-channel CIE LAB raster. L in [0,100], a and b roughly in [-128,127].
struct LabImage {
    Eigen::ArrayXXd L;
    Eigen::ArrayXXd a;
    Eigen::ArrayXXd b;

    int height() const { return static_cast<int>(L.rows()); }
    int width() const { return static_cast<int>(L.cols()); }

    Lab at(int row, int col) const { return Lab(L(row, col), a(row, col), b(row, col)); }
};

} // namespace drawlab
