#pragma once

#include <utility>
#include <vector>

#include "drawlab/colorfield.hpp"
#include "drawlab/image.hpp"
#include "drawlab/palette.hpp"
#include "drawlab/stats.hpp"

namespace drawlab::render {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

/// Minimal raster drawing surface used for figures and synthetic drawings.
class Canvas {
public:
    Canvas(int width, int height, Rgb background = {255, 255, 255});

    int width() const { return img_.width; }
    int height() const { return img_.height; }
    RasterImage take() { return std::move(img_); }
    const RasterImage& image() const { return img_; }

    void set(int row, int col, Rgb color); // clips out-of-range coordinates
    void fill_rect(int row0, int col0, int row1, int col1, Rgb color);
    void fill_ellipse(double center_row, double center_col, double radius_row, double radius_col,
                      Rgb color);
    void line(double row0, double col0, double row1, double col1, double thickness, Rgb color);

private:
    RasterImage img_;
};

/// White-to-dark ramp; darker cells saw more set mask bits.
RasterImage heatmap_image(const colorfield::HeatMap& map, int scale = 2);

/// Horizontal bar chart of a profile: row position on the vertical axis with
/// the top row at the top, bar length as percent of the 255 ceiling.
RasterImage profile_chart(const Eigen::VectorXd& profile, int width = 440);

/// Age scatter with optional per-bin medians drawn as wide marks.
RasterImage scatter_chart(const std::vector<std::pair<double, double>>& points,
                          const std::vector<std::pair<double, double>>& medians, double x_max,
                          int width = 520, int height = 360);

/// Popularity-sorted swatch strip; the widest (most popular) swatch sits on
/// the left.
RasterImage palette_strip(const palette::GroupPalette& palette, int width = 480, int height = 48);

/// Pairwise p-value grid: green at the smoothed minimum, light blue when
/// significant at alpha, blue otherwise, gray when unavailable.
RasterImage pvalue_matrix_image(const stats::TestReport& report, double p_floor, int cell = 36);

} // namespace drawlab::render
