#pragma once

#include <string>

#include "drawlab/image.hpp"

namespace drawlab::imaging {

/// Decode a PNG or JPEG file into an 8-bit RGB raster. Transparent pixels are
/// composited over white, since every input is a scan of paper.
RasterImage decode(const std::string& path);

void encode_png(const RasterImage& img, const std::string& path);
void encode_jpeg(const RasterImage& img, const std::string& path, int quality = 95);

/// Write an RGBA buffer as PNG; interleaved row-major, 4 bytes per pixel.
void encode_png_rgba(int width, int height, const std::vector<std::uint8_t>& rgba,
                     const std::string& path);

/// Per-pixel (R+G+B)/3, kept real-valued.
GrayImage to_grayscale(const RasterImage& img);

/// Bilinear resampling. The raster overload rounds back to 8 bits.
RasterImage resize(const RasterImage& img, int target_width, int target_height);
GrayImage resize(const GrayImage& img, int target_width, int target_height);
LabImage resize(const LabImage& img, int target_width, int target_height);

/// Resize so the output has the given height and proportionally scaled width.
GrayImage resize_to_height(const GrayImage& img, int target_height);

/// sRGB (D65) <-> CIE L*a*b*, L in [0,100]. Scalar forms take and produce
/// 8-bit-scaled channel values as doubles; lab_to_srgb clamps to [0,255]
/// without rounding.
Lab srgb_to_lab(double r, double g, double b);
Eigen::Vector3d lab_to_srgb(const Lab& lab);

LabImage srgb_to_lab(const RasterImage& img);
RasterImage lab_to_srgb(const LabImage& img);

} // namespace drawlab::imaging
